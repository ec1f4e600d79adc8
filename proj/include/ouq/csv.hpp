#pragma once

#include <cstdio>
#include <string>

namespace ouq::csv {

/// Shortest round-trippable decimal representation of a double.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Trim to the shortest form that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == x) {
      return shorter;
    }
  }
  return buf;
}

}  // namespace ouq::csv
