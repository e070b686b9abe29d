#pragma once

// Internal text helpers shared by the serializers: 17-significant-digit real
// formatting (round-trip exact for doubles) and strict field parsing.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "kwocce/errors.hpp"

namespace kwocce::detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_real(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(what + ": not a real number: '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
inline Int parse_int(std::string_view s, const std::string& what) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(what + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// "key=value"; value may itself contain '='.
inline std::pair<std::string_view, std::string_view> split_kv(
    std::string_view token, const std::string& what) {
  const std::size_t pos = token.find('=');
  if (pos == std::string_view::npos) {
    throw ParseError(what + ": expected key=value, got '" + std::string(token) +
                     "'");
  }
  return {token.substr(0, pos), token.substr(pos + 1)};
}

}  // namespace kwocce::detail
