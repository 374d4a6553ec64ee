#pragma once

// Small parsing helpers shared by the `family:params` text forms.

#include "graphon_games/errors.hpp"

#include <cerrno>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace graphon_games::detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

/// "name:rest" -> {name, rest}; rest is empty when there is no colon.
inline std::pair<std::string, std::string> split_name(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {trim(text), {}};
  return {trim(text.substr(0, colon)), text.substr(colon + 1)};
}

inline double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("expected a number, got an empty string");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) throw ConfigError("not a number: `" + t + "`");
  return v;
}

/// Comma-separated parameters, each `key=value` or positional.
class Params {
 public:
  explicit Params(const std::string& rest) {
    for (const auto& item : split(rest, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        positional_.push_back(parse_number(item));
      } else {
        named_[trim(item.substr(0, eq))] = parse_number(item.substr(eq + 1));
      }
    }
  }

  bool has(const std::string& key) const { return named_.count(key) > 0; }

  /// Named value, else positional slot `pos` (pos < 0 disables the fallback).
  double get(const std::string& key, int pos) const {
    if (auto it = named_.find(key); it != named_.end()) return it->second;
    if (pos >= 0 && pos < static_cast<int>(positional_.size())) return positional_[pos];
    throw ConfigError("missing parameter `" + key + "`");
  }

  double get_or(const std::string& key, int pos, double fallback) const {
    if (auto it = named_.find(key); it != named_.end()) return it->second;
    if (pos >= 0 && pos < static_cast<int>(positional_.size())) return positional_[pos];
    return fallback;
  }

 private:
  std::map<std::string, double> named_;
  std::vector<double> positional_;
};

}  // namespace graphon_games::detail
