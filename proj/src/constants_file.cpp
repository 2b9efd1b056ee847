#include "slcp/constants_file.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slcp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConstantsFile ConstantsFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("constants file not found: " + path);
  }
  ConstantsFile file;
  file.path_ = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected `name = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      file.values_[key] = std::stod(value);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": cannot parse value `" + value + "`");
    }
  }
  return file;
}

void ConstantsFile::require(const std::vector<std::string>& keys) const {
  std::string missing;
  for (const std::string& k : keys) {
    if (!has(k)) {
      if (!missing.empty()) missing += ", ";
      missing += k;
    }
  }
  if (!missing.empty()) {
    throw std::runtime_error("constants file " + path_ +
                             " is missing keys: " + missing);
  }
}

double ConstantsFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::runtime_error("constants file " + path_ + " has no key `" +
                             key + "`");
  }
  return it->second;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("SLCP_DATA_DIR"); env && *env) {
    return env;
  }
#ifdef SLCP_DATA_DIR
  return SLCP_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace slcp
