#include "pitrom/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pitrom {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ConfigFile: cannot open " + path.string());
  return parse(in);
}

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("ConfigFile: malformed section header at line " +
                                 std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("ConfigFile: expected key = value at line " +
                               std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("ConfigFile: empty key at line " + std::to_string(line_no));
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  return std::stod(get(section, key, ""));
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoi(get(section, key, ""));
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  std::vector<double> values;
  std::istringstream ss(get(section, key, ""));
  double v;
  while (ss >> v) values.push_back(v);
  return values;
}

}  // namespace pitrom
