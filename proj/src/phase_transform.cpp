// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/phase_transform.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace adsst {

const char* phase_kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::first: return "first";
    case PhaseKind::second: return "second";
    case PhaseKind::adaptive_first: return "adaptive_first";
    case PhaseKind::adaptive_second: return "adaptive_second";
  }
  return "?";
}

std::size_t PhaseField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.data().begin(), valid.data().end(), 1));
}

double default_gamma(const STFTBundle& b) {
  double m = 0.0;
  for (const cplx& v : b.V.data()) m = std::max(m, std::abs(v));
  return 1e-3 * m;
}

cplx p_zero_value(const STFTBundle& b, std::size_t i, std::size_t j, cplx* dG1) {
  const cplx V = b.V(i, j);
  const cplx Ve = b.dV_deta(i, j);
  const auto d = cell_derivatives(b, i, j);
  const double r = b.sigma_rate_t[i];
  const cplx V2 = V * V;
  const cplx g1 = (d.dVg1_deta * V - b.V_g1(i, j) * Ve) / V2;
  const cplx dt = (d.d2V_deta_dt * V - b.dV_dt(i, j) * Ve) / V2;
  const cplx g3 = (d.dVg3_deta * V - b.V_g3(i, j) * Ve) / V2;
  if (dG1) *dG1 = g1;
  return (dt + r * g3) / g1;
}

double default_gamma2(const STFTBundle& b, double gamma1) {
  std::vector<double> mags;
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j) {
      if (!(std::abs(b.V(i, j)) > gamma1)) continue;
      cplx g1;
      p_zero_value(b, i, j, &g1);
      if (std::isfinite(std::abs(g1))) mags.push_back(std::abs(g1));
    }
  if (mags.empty()) return 0.0;
  auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  return 1e-4 * *mid;
}

namespace {

PhaseField blank(const STFTBundle& b, PhaseKind kind, double gamma) {
  PhaseField f;
  f.grid = b.grid;
  f.kind = kind;
  f.gamma = gamma;
  f.omega = RMatrix(b.V.rows(), b.V.cols(), 0.0);
  f.valid = Mask(b.V.rows(), b.V.cols(), 0);
  f.second_branch = Mask(b.V.rows(), b.V.cols(), 0);
  return f;
}

double first_term(const STFTBundle& b, std::size_t i, std::size_t j) {
  return (b.dV_dt(i, j) / (kI2Pi * b.V(i, j))).real();
}

double adaptive_term(const STFTBundle& b, std::size_t i, std::size_t j) {
  const double r = b.sigma_rate_t[i];
  double w = first_term(b, i, j);
  if (r != 0.0) w += r * (b.V_g3(i, j) / (kI2Pi * b.V(i, j))).real();
  return w;
}

// Finite omega on a cell that passed the |V| threshold; anything else stays invalid.
void store(PhaseField& f, std::size_t i, std::size_t j, double w) {
  if (!std::isfinite(w)) return;
  f.omega(i, j) = w;
  f.valid(i, j) = 1;
}

}  // namespace

cplx omega_adaptive_complex(const STFTBundle& b, std::size_t i, std::size_t j) {
  const double r = b.sigma_rate_t[i];
  const cplx V = b.V(i, j);
  return r / kI2Pi + b.dV_dt(i, j) / (kI2Pi * V) + r * b.V_g3(i, j) / (kI2Pi * V);
}

PhaseField omega_first(const STFTBundle& b, std::optional<double> gamma) {
  const double g = gamma.value_or(default_gamma(b));
  PhaseField f = blank(b, PhaseKind::first, g);
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j)
      if (std::abs(b.V(i, j)) > g) store(f, i, j, first_term(b, i, j));
  return f;
}

PhaseField omega_adaptive(const STFTBundle& b, std::optional<double> gamma) {
  const double g = gamma.value_or(default_gamma(b));
  PhaseField f = blank(b, PhaseKind::adaptive_first, g);
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j)
      if (std::abs(b.V(i, j)) > g) store(f, i, j, adaptive_term(b, i, j));
  return f;
}

PhaseField omega_second(const STFTBundle& b, std::optional<double> gamma, double gamma2_prime) {
  const double g = gamma.value_or(default_gamma(b));
  PhaseField f = blank(b, PhaseKind::second, g);
  f.gamma2 = gamma2_prime;
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j) {
      const cplx V = b.V(i, j);
      if (!(std::abs(V) > g)) continue;
      const cplx Vt = b.dV_dt(i, j), Ve = b.dV_deta(i, j);
      const auto d = cell_derivatives(b, i, j);
      const cplx V2 = V * V;
      // q~ = d_t(V_t/V) / (i2pi - d_t(V_eta/V)); the IF correction is
      // Re{q~ (V_eta/V) / (i2pi)}, which is exact on linear chirps.
      const cplx dD = (d.d2V_deta_dt * V - Ve * Vt) / V2;
      const cplx den = kI2Pi - dD;
      double w = first_term(b, i, j);
      if (std::abs(den) > gamma2_prime) {
        const cplx q = ((d.d2V_dt2 * V - Vt * Vt) / V2) / den;
        const double corr = (q * (Ve / V) / kI2Pi).real();
        if (std::isfinite(corr)) {
          w += corr;
          f.second_branch(i, j) = 1;
        }
      }
      store(f, i, j, w);
    }
  return f;
}

PZero p_zero(const STFTBundle& b, std::optional<double> gamma1, std::optional<double> gamma2) {
  PZero p;
  p.gamma1 = gamma1.value_or(default_gamma(b));
  p.gamma2 = gamma2.value_or(default_gamma2(b, p.gamma1));
  p.P0 = CMatrix(b.V.rows(), b.V.cols());
  p.dG1 = CMatrix(b.V.rows(), b.V.cols());
  p.valid = Mask(b.V.rows(), b.V.cols(), 0);
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j) {
      if (!(std::abs(b.V(i, j)) > p.gamma1)) continue;
      cplx g1;
      const cplx P = p_zero_value(b, i, j, &g1);
      p.dG1(i, j) = g1;
      if (std::abs(g1) > p.gamma2 && std::isfinite(std::abs(P))) {
        p.P0(i, j) = P;
        p.valid(i, j) = 1;
      }
    }
  return p;
}

PhaseField omega_adaptive_second(const STFTBundle& b, std::optional<double> gamma1,
                                 std::optional<double> gamma2) {
  const PZero p = p_zero(b, gamma1, gamma2);
  PhaseField f = blank(b, PhaseKind::adaptive_second, p.gamma1);
  f.gamma2 = p.gamma2;
  for (std::size_t i = 0; i < b.V.rows(); ++i)
    for (std::size_t j = 0; j < b.V.cols(); ++j) {
      if (!(std::abs(b.V(i, j)) > p.gamma1)) continue;
      double w = adaptive_term(b, i, j);
      if (p.valid(i, j)) {
        w -= (b.V_g1(i, j) * p.P0(i, j) / (kI2Pi * b.V(i, j))).real();
        f.second_branch(i, j) = 1;
      }
      store(f, i, j, w);
    }
  return f;
}

void write_phase_csv(std::ostream& out, const PhaseField& f) {
  out << "t,eta,omega,valid\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.omega.rows(); ++i)
    for (std::size_t j = 0; j < f.omega.cols(); ++j)
      out << f.grid.times[i] << ',' << f.grid.freqs[j] << ',' << f.omega(i, j) << ','
          << int(f.valid(i, j)) << '\n';
}

}  // namespace adsst
