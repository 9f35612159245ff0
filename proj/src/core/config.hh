#pragma once

#include <map>
#include <string>
#include <vector>

namespace sh {

// INI-style key/value store: [section] headers, key = value lines, # or ;
// comments. Keys are tracked as they are read so a finished consumer can
// reject anything it never asked for. All lookups throw config_error with
// the section.key path and source line on failure.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  // Defaulted variants; absent keys return the fallback and are not errors.
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  long get_long_or(const std::string& section, const std::string& key, long fallback) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

  // Raw value without marking the key consumed (hashing, listings).
  std::string raw_value(const std::string& section, const std::string& key) const;

  // Rejects keys nothing ever read; call after the consumer finished.
  void check_all_used() const;
  // Rejects sections outside the allowed set.
  void check_sections(const std::vector<std::string>& allowed) const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> data_;

  const Entry& entry(const std::string& section, const std::string& key) const;
  [[noreturn]] void bad(const std::string& section, const std::string& key, int line,
                        const std::string& what) const;
};

}  // namespace sh
