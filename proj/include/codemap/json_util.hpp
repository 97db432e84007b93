#pragma once

#include <cmath>
#include <string>

namespace codemap::json_util {

/// Rounds to 6 decimals so serialized coordinates and heights are byte-stable.
inline double fixed6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

/// printf-style fixed formatting for SVG attributes.
std::string fmt_fixed(double v, int decimals);

std::string xml_escape(const std::string& s);

}  // namespace codemap::json_util
