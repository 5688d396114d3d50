#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abqfe {

// Flat key = value configuration. Lines starting with '#' and blank lines are
// ignored; a ' #' sequence starts a trailing comment. Keys keep file order in
// `entries` via the sorted map, which also makes the manifest echo stable.
class Config {
 public:
  static Config from_string(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip_comment(line);
      s = trim(s);
      if (s.empty()) continue;
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(s.substr(0, eq));
      std::string val = trim(s.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
      c.kv_[key] = val;
    }
    return c;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw std::runtime_error("missing config key: " + key);
    return it->second;
  }

  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double num(const std::string& key) const { return parse_num(key, str(key)); }
  double num(const std::string& key, double dflt) const {
    return has(key) ? num(key) : dflt;
  }

  int integer(const std::string& key) const {
    double v = num(key);
    int i = int(v);
    if (double(i) != v) throw std::runtime_error("config key is not an integer: " + key);
    return i;
  }
  int integer(const std::string& key, int dflt) const { return has(key) ? integer(key) : dflt; }

  bool flag(const std::string& key) const {
    std::string v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error("config key is not a boolean: " + key);
  }
  bool flag(const std::string& key, bool dflt) const { return has(key) ? flag(key) : dflt; }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    std::string v = str(key);
    std::size_t pos = 0;
    while (pos <= v.size()) {
      std::size_t comma = v.find(',', pos);
      std::string item = trim(comma == std::string::npos ? v.substr(pos) : v.substr(pos, comma - pos));
      if (!item.empty()) out.push_back(item);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (out.empty()) throw std::runtime_error("config key has no entries: " + key);
    return out;
  }

  std::vector<double> num_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) out.push_back(parse_num(key, item));
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  static std::string strip_comment(const std::string& s) {
    if (!s.empty() && s[0] == '#') return "";
    auto pos = s.find(" #");
    return pos == std::string::npos ? s : s.substr(0, pos);
  }

  static double parse_num(const std::string& key, const std::string& val) {
    const char* begin = val.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw std::runtime_error("config key is not a number: " + key + " = " + val);
    return v;
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace abqfe
