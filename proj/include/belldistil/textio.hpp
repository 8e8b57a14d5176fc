#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace belldistil {

// 12 significant digits; infinities render as "+inf" / "-inf".
inline std::string format_g12(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace belldistil
