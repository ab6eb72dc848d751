#pragma once

// Blahut-Arimoto capacity of a DMC, used as an independent oracle against
// the conditional-gradient solver. Deliberately kept free of any solver
// code: plain alternating updates with the standard upper/lower sandwich.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nostcap/table.hpp"

namespace testutil {

// W is the channel matrix [x][y]; returns capacity in bits.
inline double ba_capacity_bits(const nostcap::Table2<double>& w,
                               double tol = 1e-13, int max_iter = 200000) {
  const int nx = w.dim0();
  const int ny = w.dim1();
  std::vector<double> q(nx, 1.0 / nx);
  std::vector<double> p(ny);
  std::vector<double> d(nx);

  for (int it = 0; it < max_iter; ++it) {
    for (int y = 0; y < ny; ++y) {
      p[y] = 0.0;
      for (int x = 0; x < nx; ++x) p[y] += q[x] * w(x, y);
    }
    double lower = 0.0;
    double upper = -1.0;
    for (int x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (int y = 0; y < ny; ++y) {
        const double wy = w(x, y);
        if (wy > 0.0) dx += wy * std::log2(wy / p[y]);
      }
      d[x] = dx;
      lower += q[x] * dx;
      if (dx > upper) upper = dx;
    }
    if (upper - lower <= tol) return lower;
    double norm = 0.0;
    for (int x = 0; x < nx; ++x) {
      q[x] *= std::exp2(d[x] - upper);  // shift for stability
      norm += q[x];
    }
    for (double& v : q) v /= norm;
  }
  throw std::runtime_error("ba_capacity_bits: did not converge");
}

}  // namespace testutil
