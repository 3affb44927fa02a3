// Data ingestion: MNIST IDX binary files, PCA feature projection, and small
// CSV table helpers with a config-hash comment header.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace wnm {

struct IdxData {
  Eigen::MatrixXd features;  // N x (rows*cols), intensities rescaled to [0,1]
  Eigen::VectorXi labels;    // 0..9
  int rows = 0, cols = 0;
};

// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
// Throws on bad magic, truncation or count mismatch.
IdxData ingest_mnist_idx(const std::string& images_path, const std::string& labels_path);

// Writes IDX files from raw byte intensities; used for round-trip tests and
// synthetic fixtures.
void write_mnist_idx(const std::string& images_path, const std::string& labels_path,
                     const std::vector<std::uint8_t>& pixels,
                     const std::vector<std::uint8_t>& labels, int count, int rows, int cols);

// Projection onto the top-d principal components of the mean-centred data.
// Component sign fixed by making each component's largest-magnitude loading
// positive.
Eigen::MatrixXd pca_project(const Eigen::MatrixXd& features, int d);

// CSV table with optional '#' comment line, UTF-8, '.' decimal separator.
struct CsvTable {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  void write(const std::string& path) const;
};

}  // namespace wnm
