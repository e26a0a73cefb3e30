#include "steerlat/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace steerlat {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double reparse_number(double x) {
  return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace steerlat
