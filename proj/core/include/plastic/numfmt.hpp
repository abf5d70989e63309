#pragma once

#include <charconv>
#include <string>

namespace plastic {

/// Shortest decimal string that round-trips the double exactly. Locale-free,
/// so file output is byte-identical across machines.
inline std::string double_to_string(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Scientific notation with 2 significant digits and an explicit sign,
/// e.g. -3.2e-04, +1.0e-01. Table style for accuracy-change summaries.
inline std::string signed_scientific_2(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 1);
  std::string s(buf, res.ptr);
  if (!s.empty() && s[0] != '-') s.insert(s.begin(), '+');
  return s;
}

}  // namespace plastic
