#include "wnm/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wnm {

namespace {

std::uint32_t read_be32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("idx: truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

IdxData ingest_mnist_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("idx: cannot open " + images_path);
  if (read_be32(img) != 0x00000803u) throw std::runtime_error("idx: bad image magic");
  const int n = static_cast<int>(read_be32(img));
  const int rows = static_cast<int>(read_be32(img));
  const int cols = static_cast<int>(read_be32(img));
  const long pix = long(rows) * cols;
  std::vector<unsigned char> buf(pix);
  IdxData d;
  d.rows = rows;
  d.cols = cols;
  d.features.resize(n, pix);
  for (int i = 0; i < n; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), pix);
    if (!img) throw std::runtime_error("idx: truncated image records");
    for (long p = 0; p < pix; ++p) d.features(i, p) = buf[p] / 255.0;
  }

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("idx: cannot open " + labels_path);
  if (read_be32(lab) != 0x00000801u) throw std::runtime_error("idx: bad label magic");
  const int nl = static_cast<int>(read_be32(lab));
  if (nl != n) throw std::runtime_error("idx: image/label count mismatch");
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    char c;
    lab.read(&c, 1);
    if (!lab) throw std::runtime_error("idx: truncated label records");
    d.labels(i) = static_cast<unsigned char>(c);
  }
  return d;
}

void write_mnist_idx(const std::string& images_path, const std::string& labels_path,
                     const std::vector<std::uint8_t>& pixels,
                     const std::vector<std::uint8_t>& labels, int count, int rows, int cols) {
  if (static_cast<long>(pixels.size()) != long(count) * rows * cols ||
      static_cast<int>(labels.size()) != count)
    throw std::domain_error("write_mnist_idx: size mismatch");
  std::ofstream img(images_path, std::ios::binary);
  write_be32(img, 0x00000803u);
  write_be32(img, count);
  write_be32(img, rows);
  write_be32(img, cols);
  img.write(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  std::ofstream lab(labels_path, std::ios::binary);
  write_be32(lab, 0x00000801u);
  write_be32(lab, count);
  lab.write(reinterpret_cast<const char*>(labels.data()), labels.size());
}

Eigen::MatrixXd pca_project(const Eigen::MatrixXd& features, int d) {
  const int n = static_cast<int>(features.rows());
  const int p = static_cast<int>(features.cols());
  if (d < 1 || d > std::min(n, p)) throw std::domain_error("pca_project: invalid d");
  Eigen::MatrixXd centred = features.rowwise() - features.colwise().mean();
  Eigen::MatrixXd cov = centred.transpose() * centred / double(n > 1 ? n - 1 : 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw std::runtime_error("pca_project: eigensolver failed");
  Eigen::MatrixXd comps(p, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd v = es.eigenvectors().col(p - 1 - j);  // eigenvalue-descending
    int imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    comps.col(j) = v;
  }
  return centred * comps;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("CsvTable::write: cannot open " + path);
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << r[i] << (i + 1 < r.size() ? "," : "");
    out << "\n";
  }
}

}  // namespace wnm
