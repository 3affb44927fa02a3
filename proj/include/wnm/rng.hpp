// Seeded RNG stream with an explicit splitting rule so that independent
// chains and experiment cells get reproducible, non-overlapping streams.
#pragma once

#include <cstdint>
#include <random>

namespace wnm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)), seed_(seed) {}

  // Substream i of a master stream: seed' = splitmix64(seed ^ splitmix64(i+1)).
  RngStream substream(std::uint64_t i) const {
    return RngStream(seed_ ^ splitmix64(i + 1));
  }

  std::uint64_t seed() const { return seed_; }

  // Uniform on (0,1), never returning the endpoints.
  double uniform() {
    std::uint64_t r = gen_();
    return (static_cast<double>(r >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Standard normal via polar Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    std::uint64_t bound = (~std::uint64_t(0)) - (~std::uint64_t(0)) % n;
    std::uint64_t r;
    do { r = gen_(); } while (r >= bound);
    return r % n;
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wnm
