#include <cmath>
#include <cstdio>

#include "hardyvl/bounds.hpp"

int main() {
  const double f = hardyvl::lower_factor(2.0, {1.5, 1.5});
  std::printf("%.12f\n", f);
  return std::abs(f - 8.0 / 9.0) < 1e-12 ? 0 : 1;
}
