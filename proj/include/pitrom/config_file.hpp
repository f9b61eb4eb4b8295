#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pitrom {

/// Flat-section key-value configuration file:
///   [section]
///   key = value            # comment
/// Values may hold several whitespace-separated numbers.
class ConfigFile {
public:
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(std::istream& in);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace pitrom
