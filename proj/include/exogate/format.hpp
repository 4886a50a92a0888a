#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace exogate {

// All numeric output uses 9 significant digits so replays can be compared
// byte for byte.
inline std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// v rounded to what format9 would print.
inline double round9(double v) { return std::strtod(format9(v).c_str(), nullptr); }

}  // namespace exogate
