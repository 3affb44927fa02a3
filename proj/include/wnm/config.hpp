// Flat key=value experiment configuration with CLI overrides and a stable
// content hash stamped into every output CSV.
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace wnm {

class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  // FNV-1a over the sorted "key=value" lines; order-independent.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace wnm
