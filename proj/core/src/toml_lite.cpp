#include "gapflight/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gapflight {
namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Remove a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    else if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool parse_scalar_number(const std::string& tok, double* out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) return false;
  *out = v;
  return true;
}

std::string parse_basic_string(const std::string& tok, const std::string& origin, int line) {
  if (tok.size() < 2 || tok.back() != '"') fail(origin, line, "unterminated string");
  std::string out;
  for (size_t i = 1; i + 1 < tok.size(); ++i) {
    char c = tok[i];
    if (c == '\\' && i + 2 < tok.size()) {
      char n = tok[++i];
      switch (n) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(origin, line, "unsupported escape");
      }
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_array_items(const std::string& body, const std::string& origin,
                                           int line) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (char c : body) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = strip(cur);
  if (!last.empty()) items.push_back(last);
  if (in_str) fail(origin, line, "unterminated string in array");
  return items;
}

}  // namespace

TomlLite TomlLite::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

TomlLite TomlLite::parse_string(const std::string& text, const std::string& origin) {
  TomlLite out;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) fail(origin, lineno, "malformed section header");
      section = strip(line.substr(1, line.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      continue;
    }

    size_t eq = std::string::npos;
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      else if (line[i] == '=' && !in_str) { eq = i; break; }
    }
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");

    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail(origin, lineno, "empty key or value");
    std::string full = section.empty() ? key : section + "." + key;

    if (val.front() == '[') {
      if (val.back() != ']') fail(origin, lineno, "unterminated array");
      auto items = split_array_items(val.substr(1, val.size() - 2), origin, lineno);
      bool strings = !items.empty() && items.front().front() == '"';
      if (strings) {
        std::vector<std::string> arr;
        for (auto& it : items) arr.push_back(parse_basic_string(it, origin, lineno));
        out.values_[full] = arr;
      } else {
        std::vector<double> arr;
        for (auto& it : items) {
          double d;
          if (!parse_scalar_number(it, &d)) fail(origin, lineno, "bad number in array: " + it);
          arr.push_back(d);
        }
        out.values_[full] = arr;
      }
    } else if (val.front() == '"') {
      out.values_[full] = parse_basic_string(val, origin, lineno);
    } else if (val == "true" || val == "false") {
      out.values_[full] = (val == "true");
    } else {
      double d;
      if (!parse_scalar_number(val, &d)) fail(origin, lineno, "bad value: " + val);
      out.values_[full] = d;
    }
  }
  return out;
}

const TomlLite::Value* TomlLite::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

bool TomlLite::get_bool(const std::string& key, bool fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* b = std::get_if<bool>(v)) return *b;
  throw std::runtime_error("config key is not a boolean: " + key);
}

double TomlLite::get_double(const std::string& key, double fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* d = std::get_if<double>(v)) return *d;
  throw std::runtime_error("config key is not a number: " + key);
}

int TomlLite::get_int(const std::string& key, int fallback) const {
  return static_cast<int>(get_long(key, fallback));
}

long TomlLite::get_long(const std::string& key, long fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* d = std::get_if<double>(v)) return static_cast<long>(*d);
  throw std::runtime_error("config key is not a number: " + key);
}

std::string TomlLite::get_string(const std::string& key, const std::string& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* s = std::get_if<std::string>(v)) return *s;
  throw std::runtime_error("config key is not a string: " + key);
}

std::vector<double> TomlLite::get_array(const std::string& key,
                                        const std::vector<double>& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* a = std::get_if<std::vector<double>>(v)) return *a;
  throw std::runtime_error("config key is not a numeric array: " + key);
}

std::vector<std::string> TomlLite::get_string_array(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  throw std::runtime_error("config key is not a string array: " + key);
}

std::vector<std::string> TomlLite::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (auto& [k, _] : values_) out.push_back(k);
  return out;
}

}  // namespace gapflight
