// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Reference computations written independently of the library code paths.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Composite Simpson rule with n (even) panels.
template <class F>
auto simpson(F f, double a, double b, int n = 20000) {
  using R = decltype(f(a));
  const double h = (b - a) / n;
  R s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 300; ++i) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

// Closed-form Gaussian chirp transform (1 - i mu)^{-1/2} exp(-2 pi^2 u^2 / (1 - i mu)).
inline cplx gaussian_chirp(double mu, double u) {
  const cplx s{1.0, -mu};
  return std::exp(-2.0 * pi * pi * u * u / s) / std::sqrt(s);
}

inline double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

// Richardson-refined central difference: D(h) = (f(x+h) - f(x-h)) / 2h,
// R(h) = (4 D(h/2) - D(h)) / 3.
template <class F>
auto central(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}
template <class F>
auto richardson(F f, double x, double h) {
  return (4.0 * central(f, x, 0.5 * h) - central(f, x, h)) / 3.0;
}

}  // namespace oracle
