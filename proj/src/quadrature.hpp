// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace adsst::detail {

// Adaptive Gauss-Kronrod over [a, b] split into equal pieces, which keeps the
// adaptive bisection from missing narrow features of long intervals.
template <class F>
auto integrate(F f, double a, double b, int pieces = 8, double tol = 1e-13) {
  using R = decltype(f(a));
  R sum{};
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == pieces) ? b : lo + h;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, tol);
  }
  return sum;
}

}  // namespace adsst::detail
