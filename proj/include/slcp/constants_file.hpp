#pragma once

#include <map>
#include <string>
#include <vector>

namespace slcp {

/// Benchmark constants: UTF-8 text, one `name = value  # citation` per
/// line. Blank lines and full-line comments are skipped.
class ConstantsFile {
 public:
  /// Throws std::runtime_error naming the file when it cannot be read.
  static ConstantsFile load(const std::string& path);

  /// Throws std::runtime_error listing every missing key.
  void require(const std::vector<std::string>& keys) const;

  double get(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, double> values_;
};

/// Directory holding the shipped constants and reference files. The
/// SLCP_DATA_DIR environment variable overrides the build-time default.
std::string default_data_dir();

}  // namespace slcp
