#include "config.hh"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "errors.hh"

namespace sh {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

// Strips an inline comment: # or ; preceded by whitespace.
std::string strip_inline_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') &&
        (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))))
      return s.substr(0, i);
  }
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  return true;
}

}  // namespace

void Config::bad(const std::string& section, const std::string& key, int line,
                 const std::string& what) const {
  std::string where = origin_;
  if (line > 0) where += ":" + std::to_string(line);
  fail(ErrorCode::config_error, where + ": [" + section + "] " + key + ": " + what);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(strip_inline_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', ErrorCode::config_error,
              origin + ":" + std::to_string(line_no) + ": unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      require(valid_name(section), ErrorCode::config_error,
              origin + ":" + std::to_string(line_no) + ": bad section name");
      cfg.data_[section];  // empty sections are legal
      continue;
    }
    const std::size_t eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::config_error,
            origin + ":" + std::to_string(line_no) + ": expected key = value");
    require(!section.empty(), ErrorCode::config_error,
            origin + ":" + std::to_string(line_no) + ": key outside any section");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    require(valid_name(key), ErrorCode::config_error,
            origin + ":" + std::to_string(line_no) + ": bad key name");
    auto& sec = cfg.data_[section];
    require(sec.find(key) == sec.end(), ErrorCode::config_error,
            origin + ":" + std::to_string(line_no) + ": duplicate key [" + section + "] " + key);
    sec[key] = Entry{value, line_no, false};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(lower(section));
  if (s == data_.end()) return false;
  return s->second.find(lower(key)) != s->second.end();
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  const auto s = data_.find(lower(section));
  if (s == data_.end() || s->second.find(lower(key)) == s->second.end())
    bad(section, key, 0, "missing required key");
  const Entry& e = s->second.at(lower(key));
  e.used = true;
  return e;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  if (e.value.empty()) bad(section, key, e.line, "empty value");
  return e.value;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  const std::string v = lower(e.value);
  if (v == "inf" || v == "+inf" || v == "infinity")
    return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(e.value.c_str(), &end);
  if (errno != 0 || end == e.value.c_str() || *end != '\0')
    bad(section, key, e.line, "not a number: '" + e.value + "'");
  return x;
}

long Config::get_long(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(e.value.c_str(), &end, 10);
  if (errno != 0 || end == e.value.c_str() || *end != '\0')
    bad(section, key, e.line, "not an integer: '" + e.value + "'");
  return x;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const long x = get_long(section, key);
  if (x < INT_MIN || x > INT_MAX) bad(section, key, entry(section, key).line, "out of int range");
  return int(x);
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  const std::string v = lower(e.value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(section, key, e.line, "not a boolean: '" + e.value + "'");
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<double> out;
  std::string piece;
  std::istringstream in(e.value);
  while (std::getline(in, piece, ',')) {
    std::istringstream fields(piece);
    std::string tok;
    while (fields >> tok) {
      errno = 0;
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (errno != 0 || end == tok.c_str() || *end != '\0')
        bad(section, key, e.line, "not a number in list: '" + tok + "'");
      out.push_back(x);
    }
  }
  if (out.empty()) bad(section, key, e.line, "empty list");
  return out;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}
double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}
long Config::get_long_or(const std::string& section, const std::string& key,
                         long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}
int Config::get_int_or(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}
bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& kv : data_) out.push_back(kv.first);
  return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto s = data_.find(lower(section));
  if (s != data_.end())
    for (const auto& kv : s->second) out.push_back(kv.first);
  return out;
}

std::string Config::raw_value(const std::string& section, const std::string& key) const {
  const auto s = data_.find(lower(section));
  if (s == data_.end()) return {};
  const auto k = s->second.find(lower(key));
  return k == s->second.end() ? std::string{} : k->second.value;
}

void Config::check_all_used() const {
  for (const auto& sec : data_)
    for (const auto& kv : sec.second)
      if (!kv.second.used)
        bad(sec.first, kv.first, kv.second.line, "unknown key (nothing consumed it)");
}

void Config::check_sections(const std::vector<std::string>& allowed) const {
  for (const auto& sec : data_) {
    bool ok = false;
    for (const auto& a : allowed)
      if (sec.first == lower(a)) { ok = true; break; }
    if (!ok) fail(ErrorCode::config_error, origin_ + ": unknown section [" + sec.first + "]");
  }
}

}  // namespace sh
