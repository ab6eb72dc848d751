#pragma once

#include <cmath>
#include <span>

namespace nostcap {

// x log2(x) with the 0 log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Binary entropy in bits.
inline double binary_entropy_bits(double p) {
  return -xlog2x(p) - xlog2x(1.0 - p);
}

// Shannon entropy in bits of a pmf.
inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h;
}

}  // namespace nostcap
