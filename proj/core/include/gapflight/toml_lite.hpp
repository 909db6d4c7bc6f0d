#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gapflight {

// Minimal TOML subset: [section] / [dotted.section] headers, key = value pairs,
// '#' comments, basic strings, integers, floats, booleans, and flat arrays.
// Keys are exposed fully qualified ("sac.lr"). No tables-in-arrays, no dates,
// no multiline strings; that is all the config format here needs.
class TomlLite {
 public:
  using Value = std::variant<bool, double, std::string, std::vector<double>,
                             std::vector<std::string>>;

  static TomlLite parse_file(const std::string& path);
  static TomlLite parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  bool get_bool(const std::string& key, bool fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_array(const std::string& key,
                                            const std::vector<std::string>& fallback) const;

  // Keys actually present, for config echo / debugging.
  std::vector<std::string> keys() const;

 private:
  const Value* find(const std::string& key) const;
  std::map<std::string, Value> values_;
};

}  // namespace gapflight
