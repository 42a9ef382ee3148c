// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "quadrature.hpp"

namespace adsst {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_amplitude(const MulticomponentModel& m, double t) {
  double s = 0.0;
  for (const auto& c : m.components) s += c.amplitude(t);
  return s;
}

// Per-time snapshot of the model and the chirped transforms.
struct Frame {
  double t = 0.0, s = 0.0;
  std::vector<cplx> x;
  std::vector<double> A, f1, f2;
  std::vector<ChirpedWindowTransform> tr;
};

Frame make_frame(const MulticomponentModel& m, const WindowFamily& w, double s, double tau0,
                 double t, bool chirped) {
  Frame f;
  f.t = t;
  f.s = s;
  for (const auto& c : m.components) {
    f.x.push_back(c.value(t));
    f.A.push_back(c.amplitude(t));
    f.f1.push_back(c.freq(t));
    f.f2.push_back(c.chirp_rate(t));
    if (chirped) f.tr.push_back(chirped_transform(w, s, c.chirp_rate(t), tau0));
  }
  return f;
}

CrossTerms frame_cross_terms(const Frame& f, std::size_t k, double eta) {
  CrossTerms c;
  for (std::size_t l = 0; l < f.x.size(); ++l) {
    const double u = f.s * (eta - f.f1[l]);
    const cplx G1 = f.tr[l].g_j(1, u);
    c.g1_envelope += f.A[l] * std::abs(G1);
    if (l == k) continue;
    const cplx G0 = f.tr[l].g_j(0, u);
    const cplx G2 = f.tr[l].g_j(2, u);
    const double d1 = f.f1[l] - f.f1[k], d2 = f.f2[l] - f.f2[k];
    c.B += f.x[l] * d1 * G0;
    c.D += f.x[l] * d2 * G1;
    c.E += f.x[l] * d1 * G1;
    c.F += f.x[l] * d2 * G2;
  }
  return c;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw InvalidArgument("bounds need at least one time");
}

double gaussian_tail_cap(double tau0) {
  return tau0 / (std::sqrt(kTwoPi) * (1.0 + std::sqrt(1.0 - tau0)));
}

}  // namespace

RemainderBounds first_order_remainder_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                                             const WindowFamily& w, const std::vector<double>& times) {
  RemainderBounds r;
  const double K = static_cast<double>(m.size());
  std::vector<double> M2(m.size(), 0.0);
  for (std::size_t k = 0; k < m.size(); ++k)
    for (double t : times) M2[k] = std::max(M2[k], std::abs(m.components[k].chirp_rate(t)));
  const double I1 = w.moment(1), I2 = w.moment(2), I3 = w.moment(3);
  const double J1 = w.derivative_moment(1), J2 = w.derivative_moment(2), J3 = w.derivative_moment(3);
  for (double t : times) {
    const double s = sigma(t), SA = sum_amplitude(m, t);
    r.Lambda0.push_back(K * m.eps1 * I1 + kPi * m.eps2 * I2 * s * SA);
    r.Lambda0_tilde.push_back(K * m.eps1 * J1 + kPi * m.eps2 * J2 * s * SA);
    double lb = 0.0, lbt = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto& c = m.components[k];
      const double f1 = c.freq(t), A = c.amplitude(t);
      lb += m.eps1 * (I1 * f1 + 0.5 * M2[k] * I2 * s) +
            kPi * m.eps2 * s * A * (I2 * f1 + M2[k] * I3 * s / 3.0);
      lbt += m.eps1 * (J1 * f1 + 0.5 * M2[k] * J2 * s) +
             kPi * m.eps2 * s * A * (J2 * f1 + M2[k] * J3 * s / 3.0);
    }
    r.Lambda0_b.push_back(lb);
    r.Lambda0_tilde_b.push_back(lbt);
  }
  return r;
}

GammaBounds gamma_bounds(const MulticomponentModel& m, const WindowFamily& w,
                         const std::vector<double>& times) {
  GammaBounds g;
  const double K = static_cast<double>(m.size());
  std::vector<double> M2(m.size(), 0.0);
  for (std::size_t k = 0; k < m.size(); ++k)
    for (double t : times) M2[k] = std::max(M2[k], std::abs(m.components[k].chirp_rate(t)));
  const double I1 = w.moment(1), I2 = w.moment(2), I3 = w.moment(3);
  const double J1 = w.derivative_moment(1), J2 = w.derivative_moment(2), J3 = w.derivative_moment(3);
  for (double t : times) {
    const double SA = sum_amplitude(m, t);
    g.Gamma0.push_back(K * I1 + kPi * I2 * SA);
    g.Gamma0_tilde.push_back(K * J1 + kPi * J2 * SA);
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double f1 = m.components[k].freq(t), A = m.components[k].amplitude(t);
      a += f1 * I1 + 0.5 * M2[k] * I2 + kPi * A * (f1 * I2 + M2[k] * I3 / 3.0);
      b += f1 * J1 + 0.5 * M2[k] * J2 + kPi * A * (f1 * J2 + M2[k] * J3 / 3.0);
    }
    g.Gamma0_wu.push_back(a);
    g.Gamma0_tilde_wu.push_back(b);
  }
  return g;
}

double theorem_a_bound(double Gamma0, double Gamma0_tilde, double alpha, double eps,
                       double eps_tilde) {
  return (alpha * (eps * Gamma0) + (eps * Gamma0_tilde) / kTwoPi) / eps_tilde;
}

ResidualBounds second_order_residual_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                                            const WindowFamily& w, const std::vector<double>& times) {
  ResidualBounds r;
  const double K = static_cast<double>(m.size());
  const double e1 = m.eps1, e3 = m.eps3;
  for (double t : times) {
    const double s = sigma(t), c = kPi / 3.0 * e3 * s * s * sum_amplitude(m, t);
    r.Pi0.push_back(K * e1 * w.moment(1) + c * w.moment(3));
    r.Pi1.push_back(K * e1 * w.moment(2) + c * w.moment(4));
    r.Pi2.push_back(K * e1 * w.moment(3) + c * w.moment(5));
    r.Pi0_tilde.push_back(K * e1 * w.derivative_moment(1) + c * w.derivative_moment(3));
    r.Pi1_tilde.push_back(K * e1 * w.derivative_moment(2) + c * w.derivative_moment(4));
  }
  return r;
}

double cube_root_threshold(const MulticomponentModel& m) {
  return std::cbrt(std::max({m.eps1, m.eps2, m.eps3}));
}

Theorem1Bounds theorem1_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                               const WindowFamily& w, double tau0, double eps1_tilde,
                               const std::vector<double>& times, const BoundOptions& opt) {
  check_times(times);
  if (!(eps1_tilde > 0.0)) throw InvalidArgument("eps~1 must be positive");
  if (opt.sup_samples < 2) throw InvalidArgument("sup sampling needs at least two points");
  Theorem1Bounds r;
  const std::size_t K = m.size(), T = times.size();
  r.times = times;
  r.tau0 = tau0;
  r.eps1_tilde = eps1_tilde;
  r.alpha = effective_support(w, tau0);
  r.remainder = first_order_remainder_bounds(m, sigma, w, times);
  const auto& L0 = opt.condition_b ? r.remainder.Lambda0_b : r.remainder.Lambda0;
  const auto& L0t = opt.condition_b ? r.remainder.Lambda0_tilde_b : r.remainder.Lambda0_tilde;
  if (opt.condition_b) r.flags.push_back("remainder constants: condition-B variant");

  const double alpha = r.alpha, g0 = std::abs(w.g0());
  auto fourier = [&w](double u) { return w.fourier(u); };
  r.tail = std::abs(w.g0() - detail::integrate(fourier, -alpha, alpha));
  r.tail_cap = w.is_gaussian() ? gaussian_tail_cap(tau0) : kNaN;
  const auto us = linspace(-alpha, alpha, opt.sup_samples);

  r.bd1_cross_k = RMatrix(K, T);
  r.bd2 = RMatrix(K, T);
  r.bd2_main = RMatrix(K, T);
  r.m_sum = RMatrix(K, T);
  for (std::size_t i = 0; i < T; ++i) {
    const double t = times[i], s = sigma(t);
    if (!(s > 0.0)) throw InvalidArgument("sigma must be positive");
    r.sigma.push_back(s);
    const double SA = sum_amplitude(m, t);
    r.bd1_main.push_back((alpha * L0[i] + L0t[i] / kTwoPi) / eps1_tilde);
    RMatrix mm(K, K, 0.0);
    double cross_max = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double fk = m.components[k].freq(t);
      double cross = 0.0, msum = 0.0;
      for (std::size_t l = 0; l < K; ++l) {
        if (l == k) continue;
        const double fl = m.components[l].freq(t), Al = m.components[l].amplitude(t);
        const double shift = s * (fk - fl);
        double sup = 0.0;
        for (double u : us) sup = std::max(sup, std::abs(w.fourier(u + shift)));
        cross += Al * std::abs(fl - fk) * sup;
        mm(l, k) = std::abs(detail::integrate(fourier, shift - alpha, shift + alpha));
        msum += Al * mm(l, k);
      }
      r.bd1_cross_k(k, i) = cross / eps1_tilde;
      cross_max = std::max(cross_max, r.bd1_cross_k(k, i));
      r.m_sum(k, i) = msum;
      r.bd2_main(k, i) = 2.0 * alpha * (s * L0[i] + eps1_tilde) / g0;
      r.bd2(k, i) = r.bd2_main(k, i) + (m.components[k].amplitude(t) * r.tail + msum) / g0;
    }
    r.m.push_back(std::move(mm));
    r.bd1_cross.push_back(cross_max);
    r.bd1.push_back(r.bd1_main[i] + cross_max);
    r.eps3_tilde.push_back(alpha / s);
    r.clause_a_lhs.push_back(s * L0[i] + tau0 * SA);
    r.clause_a_ok.push_back(eps1_tilde >= r.clause_a_lhs.back());
    r.clause_c_ok.push_back(r.bd1.back() <= alpha / s);
  }
  if (std::count(r.clause_a_ok.begin(), r.clause_a_ok.end(), 0))
    r.flags.push_back("eps~1 below sigma Lambda0 + tau0 sum A at some times");
  if (std::count(r.clause_c_ok.begin(), r.clause_c_ok.end(), 0))
    r.flags.push_back("bd1 exceeds alpha/sigma at some times; recovery bound not applicable there");
  return r;
}

CrossTerms cross_terms(const MulticomponentModel& m, const SigmaProfile& sigma,
                       const WindowFamily& w, double t, std::size_t k, double eta) {
  if (k >= m.size()) throw InvalidArgument("component index out of range");
  return frame_cross_terms(make_frame(m, w, sigma(t), 0.01, t, true), k, eta);
}

ErrEnvelope err_envelope(const CrossTerms& c, double s, double alpha_k, double phi2_k,
                         double Pi0, double Pi1, double Pi2, double Pi0_tilde, double Pi1_tilde) {
  const double p2 = 4.0 * kPi * kPi;
  ErrEnvelope e;
  e.err1 = kTwoPi * std::abs(c.B) + kTwoPi * s * std::abs(c.D) + kTwoPi * alpha_k * Pi0 +
           Pi0_tilde + kTwoPi * std::abs(phi2_k) * s * s * Pi1;
  e.err2 = p2 * s * std::abs(c.E) + p2 * s * s * std::abs(c.F) + kTwoPi * s * Pi0 +
           p2 * alpha_k * s * Pi1 + kTwoPi * s * Pi1_tilde + p2 * std::abs(phi2_k) * s * s * s * Pi2;
  return e;
}

namespace {

Theorem2Bounds theorem2_impl(const MulticomponentModel& m, const SigmaProfile& sigma,
                             const WindowFamily& w, double tau0, double e1t, double e2t,
                             const std::vector<double>& times, const STFTBundle* b,
                             const BoundOptions& opt) {
  check_times(times);
  if (!(e1t > 0.0) || !(e2t > 0.0)) throw InvalidArgument("eps~1 and eps~2 must be positive");
  if (opt.sup_samples < 2) throw InvalidArgument("sup sampling needs at least two points");
  Theorem2Bounds r;
  const std::size_t K = m.size(), T = times.size();
  r.times = times;
  r.tau0 = tau0;
  r.eps1_tilde = e1t;
  r.eps2_tilde = e2t;
  r.from_bundle = b != nullptr;
  r.zt_measured = b != nullptr;
  r.residual = second_order_residual_bounds(m, sigma, w, times);
  const auto& P = r.residual;
  r.flags.push_back("Theorem 2(a) constant eps_0 read as tau0");
  if (!b) r.flags.push_back("|Z_t| not measured (no bundle); Bd2'' uses |Z_t| = 0");

  const ZoneSet zO = zones(m, sigma, w, tau0, ZoneKind::O, times);
  r.alpha_k = zO.alpha_k;
  r.L = l_k(zO).L;
  r.Bd1_k = RMatrix(K, T, 0.0);
  r.Bd2 = RMatrix(K, T);
  r.Bd2_prime = RMatrix(K, T);
  r.Bd2_second = RMatrix(K, T);
  r.M_sum = RMatrix(K, T);
  r.Zt = RMatrix(K, T, 0.0);
  r.tail = RMatrix(K, T);
  r.tail_cap = RMatrix(K, T);
  r.eps3_tilde = RMatrix(K, T);
  r.clause_c_ok = Mask(K, T, 0);
  const double g0 = std::abs(w.g0()), norm1 = w.one_norm();

  for (std::size_t i = 0; i < T; ++i) {
    const double t = times[i], s = sigma(t);
    r.sigma.push_back(s);
    const Frame f = make_frame(m, w, s, tau0, t, true);
    const double SA = sum_amplitude(m, t);
    r.clause_a_lhs.push_back(tau0 * SA + s * P.Pi0[i]);
    r.clause_a_ok.push_back(e1t >= r.clause_a_lhs.back());
    double bd1 = 0.0;
    RMatrix MM(K, K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double ak = r.alpha_k(k, i), hw = ak / s, fk = f.f1[k], f2k = f.f2[k];
      auto point = [&](double eta, double vg1, double dv) {
        const ErrEnvelope e = err_envelope(frame_cross_terms(f, k, eta), s, ak, f2k, P.Pi0[i],
                                           P.Pi1[i], P.Pi2[i], P.Pi0_tilde[i], P.Pi1_tilde[i]);
        return e.err1 / (kTwoPi * e1t) +
               vg1 * (dv * e.err1 + e1t * e.err2) / (kTwoPi * e1t * e1t * e1t * e2t);
      };
      double sup = 0.0;
      if (b) {
        std::size_t zcount = 0;
        for (std::size_t j = 0; j < b->grid.n_freqs(); ++j) {
          const double eta = b->grid.freqs[j];
          if (!(std::abs(eta - fk) < hw)) continue;
          sup = std::max(sup, point(eta, std::abs(b->V_g1(i, j)), std::abs(b->dV_deta(i, j))));
          if (std::abs(b->V(i, j)) > e1t) {
            cplx dG1;
            p_zero_value(*b, i, j, &dG1);
            if (!(std::abs(dG1) > e2t)) ++zcount;
          }
        }
        r.Zt(k, i) = static_cast<double>(zcount) * b->grid.deta();
      } else {
        for (double eta : linspace(fk - hw, fk + hw, opt.sup_samples)) {
          const double vg1 = frame_cross_terms(f, k, eta).g1_envelope + s * P.Pi1[i];
          sup = std::max(sup, point(eta, vg1, kTwoPi * s * vg1));
        }
      }
      r.Bd1_k(k, i) = sup;
      bd1 = std::max(bd1, sup);

      const auto& Gk = f.tr[k];
      const cplx inner{detail::integrate([&Gk](double u) { return Gk.value(u).real(); }, -ak, ak),
                       detail::integrate([&Gk](double u) { return Gk.value(u).imag(); }, -ak, ak)};
      r.tail(k, i) = std::abs(w.g0() - inner);
      r.tail_cap(k, i) = w.is_gaussian()
                             ? std::pow(1.0 + Gk.mu() * Gk.mu(), 0.25) * gaussian_tail_cap(tau0)
                             : kNaN;
      double msum = 0.0;
      for (std::size_t l = 0; l < K; ++l) {
        if (l == k) continue;
        const auto& Gl = f.tr[l];
        const double shift = s * (fk - f.f1[l]);
        MM(l, k) = detail::integrate([&Gl, shift](double u) { return std::abs(Gl.value(u + shift)); },
                                     -ak, ak);
        msum += f.A[l] * MM(l, k);
      }
      r.M_sum(k, i) = msum;
      r.Bd2_prime(k, i) = (2.0 * ak * (e1t + s * P.Pi0[i]) + f.A[k] * r.tail(k, i) + msum) / g0;
      r.Bd2_second(k, i) =
          (2.0 * ak * s * P.Pi0[i] + s * f.A[k] * norm1 * r.Zt(k, i) + msum) / g0;
      r.Bd2(k, i) = r.Bd2_prime(k, i) + r.Bd2_second(k, i);
      r.eps3_tilde(k, i) = r.L(k, i) / 2.0;
    }
    r.M.push_back(std::move(MM));
    r.Bd1.push_back(bd1);
    for (std::size_t k = 0; k < K; ++k) r.clause_c_ok(k, i) = bd1 <= r.L(k, i) / 2.0;
  }
  if (std::count(r.clause_a_ok.begin(), r.clause_a_ok.end(), 0))
    r.flags.push_back("eps~1 below tau0 sum A + sigma Pi0 at some times");
  if (std::count(r.clause_c_ok.data().begin(), r.clause_c_ok.data().end(), 0))
    r.flags.push_back("Bd1 exceeds L_k/2 at some (t, k); recovery bound computed only where feasible");
  return r;
}

}  // namespace

Theorem2Bounds theorem2_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                               const WindowFamily& w, double tau0, double eps1_tilde,
                               double eps2_tilde, const std::vector<double>& times,
                               const BoundOptions& opt) {
  return theorem2_impl(m, sigma, w, tau0, eps1_tilde, eps2_tilde, times, nullptr, opt);
}

Theorem2Bounds theorem2_bounds(const MulticomponentModel& m, const STFTBundle& b, double tau0,
                               double eps1_tilde, double eps2_tilde, const BoundOptions& opt) {
  return theorem2_impl(m, b.sigma, b.window, tau0, eps1_tilde, eps2_tilde, b.grid.times, &b, opt);
}

LemmaDefect lemma1_defect(const STFTBundle& b, std::size_t i, std::size_t j,
                          const ComponentProfile& c) {
  const double t = b.grid.times[i], s = b.sigma_t[i], r = b.sigma_rate_t[i];
  const cplx a = kI2Pi * c.freq(t) - r;
  const cplx q = kI2Pi * c.chirp_rate(t) * s;
  const auto d = cell_derivatives(b, i, j);
  LemmaDefect out;
  out.err1 = b.dV_dt(i, j) - a * b.V(i, j) - q * b.V_g1(i, j) + r * b.V_g3(i, j);
  out.err2 = d.d2V_deta_dt - a * b.dV_deta(i, j) - q * d.dVg1_deta + r * d.dVg3_deta;
  return out;
}

long zone_of(const MulticomponentModel& m, const WindowFamily& w, double s, double tau0,
             double t, double eta) {
  long best = -1;
  double best_d = kInf;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& c = m.components[k];
    const double hw = chirped_transform(w, s, c.chirp_rate(t), tau0).alpha() / s;
    const double d = std::abs(eta - c.freq(t)) / hw;
    if (d < 1.0 && d < best_d) {
      best_d = d;
      best = static_cast<long>(k);
    }
  }
  return best;
}

Lemma1Report verify_lemma1(const STFTBundle& b, const MulticomponentModel& m, double tau0,
                           double abs_tol) {
  Lemma1Report rep;
  const std::size_t T = b.grid.n_times();
  const auto P = second_order_residual_bounds(m, b.sigma, b.window, b.grid.times);
  for (std::size_t i = 0; i < T; ++i) {
    if (!b.interior(i)) continue;
    const double t = b.grid.times[i], s = b.sigma_t[i];
    const Frame f = make_frame(m, b.window, s, tau0, t, true);
    for (std::size_t j = 0; j < b.grid.n_freqs(); ++j) {
      const double eta = b.grid.freqs[j];
      long k = -1;
      double best = kInf;
      for (std::size_t kk = 0; kk < m.size(); ++kk) {
        const double d = std::abs(eta - f.f1[kk]) * s / f.tr[kk].alpha();
        if (d < 1.0 && d < best) {
          best = d;
          k = static_cast<long>(kk);
        }
      }
      if (k < 0) continue;
      const auto ku = static_cast<std::size_t>(k);
      const double defect = std::abs(lemma1_defect(b, i, j, m.components[ku]).err1);
      const ErrEnvelope e = err_envelope(frame_cross_terms(f, ku, eta), s, f.tr[ku].alpha(),
                                         f.f2[ku], P.Pi0[i], P.Pi1[i], P.Pi2[i], P.Pi0_tilde[i],
                                         P.Pi1_tilde[i]);
      ++rep.checked;
      rep.max_defect = std::max(rep.max_defect, defect);
      const double excess = defect - e.err1;
      rep.max_excess = rep.checked == 1 ? excess : std::max(rep.max_excess, excess);
      if (excess > abs_tol) ++rep.violations;
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

Lemma3Report verify_lemma3(const STFTBundle& b, const MulticomponentModel& m, double tau0,
                           std::optional<double> gamma1, std::optional<double> gamma2) {
  Lemma3Report rep;
  const PZero pz = p_zero(b, gamma1, gamma2);
  for (std::size_t i = 0; i < b.grid.n_times(); ++i) {
    if (!b.interior(i)) continue;
    const double t = b.grid.times[i], s = b.sigma_t[i];
    for (std::size_t j = 0; j < b.grid.n_freqs(); ++j) {
      if (!pz.valid(i, j)) continue;
      const long k = zone_of(m, b.window, s, tau0, t, b.grid.freqs[j]);
      if (k < 0) continue;
      const auto& c = m.components[static_cast<std::size_t>(k)];
      const LemmaDefect d = lemma1_defect(b, i, j, c);
      const auto cd = cell_derivatives(b, i, j);
      const cplx V = b.V(i, j), Ve = b.dV_deta(i, j);
      const cplx err3 = (V * d.err2 - Ve * d.err1) / (V * cd.dVg1_deta - b.V_g1(i, j) * Ve);
      const cplx target = kI2Pi * s * c.chirp_rate(t);
      const cplx P0 = pz.P0(i, j);
      ++rep.checked;
      const double scale = std::abs(P0) + std::abs(target) + std::abs(err3);
      if (scale > 0.0)
        rep.max_identity_rel = std::max(rep.max_identity_rel, std::abs(P0 - target - err3) / scale);
      const double dev = std::abs(P0 - target);
      rep.max_p0_dev = std::max(rep.max_p0_dev, dev);
      if (std::abs(target) > 0.0) rep.max_p0_rel = std::max(rep.max_p0_rel, dev / std::abs(target));
    }
  }
  return rep;
}

namespace {

struct Zones {
  std::vector<double> center, halfwidth;
};

Comparison compare(const MulticomponentModel& m, const STFTBundle& b, const PhaseField& phase,
                   const SqueezedTFR& sq, int order, double e1t, double e2t,
                   const std::vector<double>& if_bound, const std::vector<Zones>& zs,
                   const RMatrix& rec_bound, const RMatrix& eps3, const Mask& feasible) {
  const std::size_t T = b.grid.n_times(), K = m.size();
  if (phase.omega.rows() != T || phase.omega.cols() != b.grid.n_freqs() || sq.R.rows() != T)
    throw InvalidArgument("bundle, phase field and squeezed transform live on different grids");
  if (if_bound.size() != T) throw InvalidArgument("bound report and bundle have different times");
  if (phase.gamma != e1t || (order == 2 && phase.gamma2 != e2t))
    throw InvalidArgument("phase thresholds differ from the bound thresholds");
  Comparison c;
  c.order = order;
  std::vector<std::vector<double>> rec(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> ridge(T), hw(T);
    for (std::size_t i = 0; i < T; ++i) {
      ridge[i] = m.components[k].freq(b.grid.times[i]);
      hw[i] = eps3(k, i);
    }
    const auto rc = recover_component(sq, ridge, hw, b.sigma_t, b.window);
    rec[k].resize(T);
    for (std::size_t i = 0; i < T; ++i)
      rec[k][i] = std::abs(rc.signal.samples[i] - m.components[k].value(b.grid.times[i]));
  }
  for (std::size_t i = 0; i < T; ++i) {
    if (!b.interior(i)) continue;
    ComparisonRow row;
    row.t = b.grid.times[i];
    row.if_bound = if_bound[i];
    for (std::size_t j = 0; j < b.grid.n_freqs(); ++j) {
      if (!(std::abs(b.V(i, j)) > e1t)) continue;
      const double eta = b.grid.freqs[j];
      std::size_t hits = 0, k = 0;
      for (std::size_t kk = 0; kk < K; ++kk)
        if (std::abs(eta - zs[i].center[kk]) < zs[i].halfwidth[kk]) {
          ++hits;
          k = kk;
        }
      if (hits == 0) ++row.uncovered;
      else if (hits > 1) ++row.overlapping;
      else ++row.covered;
      if (hits != 1) continue;
      if (order == 2) {
        cplx dG1;
        p_zero_value(b, i, j, &dG1);
        if (!(std::abs(dG1) > e2t)) continue;
      }
      if (!phase.valid(i, j)) continue;
      ++row.if_cells;
      row.if_error = std::max(row.if_error, std::abs(phase.omega(i, j) - zs[i].center[k]));
    }
    row.clause_a = row.uncovered == 0 && row.overlapping == 0;
    row.clause_b = row.if_error < row.if_bound;
    bool all_feasible = K > 0;
    for (std::size_t k = 0; k < K; ++k) all_feasible = all_feasible && feasible(k, i);
    row.recovery_checked = all_feasible;
    if (all_feasible) {
      ++c.recovery_frames;
      for (std::size_t k = 0; k < K; ++k) {
        row.rec_error.push_back(rec[k][i]);
        row.rec_bound.push_back(rec_bound(k, i));
        if (!(rec[k][i] <= rec_bound(k, i))) row.clause_c = false;
      }
    }
    c.clause_a = c.clause_a && row.clause_a;
    c.clause_b = c.clause_b && row.clause_b;
    c.clause_c = c.clause_c && row.clause_c;
    c.rows.push_back(std::move(row));
  }
  std::size_t if_cells = 0;
  for (const auto& row : c.rows) if_cells += row.if_cells;
  if (!c.rows.empty() && if_cells == 0) {
    c.clause_b = false;
    c.notes.push_back("no masked cell inside a single zone; IF bound not exercised");
  }
  if (c.rows.empty()) {
    c.clause_a = c.clause_b = c.clause_c = false;
    c.notes.push_back("no interior frames");
  } else if (c.recovery_frames == 0) {
    c.clause_c = false;
    c.notes.push_back("recovery bound not applicable at any interior frame");
  }
  return c;
}

}  // namespace

Comparison empirical_vs_bound(const MulticomponentModel& m, const STFTBundle& b,
                              const PhaseField& phase, const SqueezedTFR& s,
                              const Theorem1Bounds& r) {
  if (phase.kind != PhaseKind::adaptive_first)
    throw InvalidArgument("first-order comparison needs the adaptive phase transform");
  const std::size_t K = m.size(), T = b.grid.n_times();
  std::vector<Zones> zs(T);
  RMatrix eps3(K, T);
  Mask feasible(K, T, 0);
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      zs[i].center.push_back(m.components[k].freq(b.grid.times[i]));
      zs[i].halfwidth.push_back(r.alpha / b.sigma_t[i]);
      eps3(k, i) = r.eps3_tilde.at(i);
      feasible(k, i) = r.clause_c_ok.at(i);
    }
  }
  return compare(m, b, phase, s, 1, r.eps1_tilde, 0.0, r.bd1, zs, r.bd2, eps3, feasible);
}

Comparison empirical_vs_bound(const MulticomponentModel& m, const STFTBundle& b,
                              const PhaseField& phase, const SqueezedTFR& s,
                              const Theorem2Bounds& r) {
  if (phase.kind != PhaseKind::adaptive_second)
    throw InvalidArgument("second-order comparison needs the adaptive second-order transform");
  const std::size_t K = m.size(), T = b.grid.n_times();
  std::vector<Zones> zs(T);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      zs[i].center.push_back(m.components[k].freq(b.grid.times[i]));
      zs[i].halfwidth.push_back(r.alpha_k(k, i) / b.sigma_t[i]);
    }
  return compare(m, b, phase, s, 2, r.eps1_tilde, r.eps2_tilde, r.Bd1, zs, r.Bd2, r.eps3_tilde,
                 r.clause_c_ok);
}

std::string Comparison::summary() const {
  std::size_t a = 0, b = 0, cc = 0;
  double worst_if = 0.0, worst_rec = 0.0;
  for (const auto& r : rows) {
    a += !r.clause_a;
    b += !r.clause_b;
    cc += !r.clause_c;
    if (r.if_bound > 0.0) worst_if = std::max(worst_if, r.if_error / r.if_bound);
    for (std::size_t k = 0; k < r.rec_error.size(); ++k)
      if (r.rec_bound[k] > 0.0) worst_rec = std::max(worst_rec, r.rec_error[k] / r.rec_bound[k]);
  }
  std::ostringstream out;
  out << "order " << order << ", " << rows.size() << " interior frames\n"
      << "  clause (a) zone coverage: " << (clause_a ? "pass" : "FAIL") << " (" << a
      << " failing frames)\n"
      << "  clause (b) IF error vs bound: " << (clause_b ? "pass" : "FAIL") << " (" << b
      << " failing frames, worst error/bound " << worst_if << ")\n"
      << "  clause (c) recovery vs bound: " << (clause_c ? "pass" : "FAIL") << " (" << cc
      << " failing frames, " << recovery_frames << " checked, worst error/bound " << worst_rec
      << ")";
  for (const auto& n : notes) out << "\n  note: " << n;
  return out.str();
}

void write_comparison_csv(std::ostream& out, const Comparison& c) {
  out << "t,covered,uncovered,overlapping,if_cells,if_error,if_bound,clause_a,clause_b,"
         "recovery_checked,rec_error_max,rec_margin_min,clause_c\n"
      << std::setprecision(17);
  for (const auto& r : c.rows) {
    double emax = 0.0, margin = kInf;
    for (std::size_t k = 0; k < r.rec_error.size(); ++k) {
      emax = std::max(emax, r.rec_error[k]);
      margin = std::min(margin, r.rec_bound[k] - r.rec_error[k]);
    }
    out << r.t << ',' << r.covered << ',' << r.uncovered << ',' << r.overlapping << ','
        << r.if_cells << ',' << r.if_error << ',' << r.if_bound << ',' << r.clause_a << ','
        << r.clause_b << ',' << r.recovery_checked << ',' << emax << ','
        << (r.recovery_checked ? margin : kNaN) << ',' << r.clause_c << '\n';
  }
}

void write_bound_report_csv(std::ostream& out, const BoundReport& r) {
  const std::size_t T = r.times.size();
  auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : kNaN; };
  out << std::setprecision(17) << "t,sigma,Lambda0,Lambda0_tilde,Lambda0_b,Lambda0_tilde_b,"
      << "Gamma0,Gamma0_tilde,Gamma0_wu,Gamma0_tilde_wu,Pi0,Pi1,Pi2,Pi0_tilde,Pi1_tilde";
  const std::size_t K1 = r.first ? r.first->bd2.rows() : 0;
  const std::size_t K2 = r.second ? r.second->Bd2.rows() : 0;
  if (r.first) {
    out << ",eps1_tilde,bd1,bd1_main,bd1_cross";
    for (std::size_t k = 1; k <= K1; ++k)
      out << ",bd2_" << k << ",m_sum_" << k << ",eps3_tilde_" << k;
    out << ",thm1_clause_a,thm1_clause_c";
  }
  if (r.second) {
    out << ",eps1_tilde2,eps2_tilde,Bd1";
    for (std::size_t k = 1; k <= K2; ++k)
      out << ",Bd2_" << k << ",Bd2p_" << k << ",Bd2pp_" << k << ",M_sum_" << k << ",L_" << k
          << ",Zt_" << k << ",eps3_tilde2_" << k;
    out << ",thm2_clause_a";
  }
  out << '\n';
  for (std::size_t i = 0; i < T; ++i) {
    out << r.times[i] << ',' << at(r.sigma, i) << ',' << at(r.remainder.Lambda0, i) << ','
        << at(r.remainder.Lambda0_tilde, i) << ',' << at(r.remainder.Lambda0_b, i) << ','
        << at(r.remainder.Lambda0_tilde_b, i) << ',' << at(r.gamma.Gamma0, i) << ','
        << at(r.gamma.Gamma0_tilde, i) << ',' << at(r.gamma.Gamma0_wu, i) << ','
        << at(r.gamma.Gamma0_tilde_wu, i) << ',' << at(r.residual.Pi0, i) << ','
        << at(r.residual.Pi1, i) << ',' << at(r.residual.Pi2, i) << ','
        << at(r.residual.Pi0_tilde, i) << ',' << at(r.residual.Pi1_tilde, i);
    if (r.first) {
      const auto& f = *r.first;
      out << ',' << f.eps1_tilde << ',' << f.bd1[i] << ',' << f.bd1_main[i] << ','
          << f.bd1_cross[i];
      for (std::size_t k = 0; k < K1; ++k)
        out << ',' << f.bd2(k, i) << ',' << f.m_sum(k, i) << ',' << f.eps3_tilde[i];
      out << ',' << int(f.clause_a_ok[i]) << ',' << int(f.clause_c_ok[i]);
    }
    if (r.second) {
      const auto& s = *r.second;
      out << ',' << s.eps1_tilde << ',' << s.eps2_tilde << ',' << s.Bd1[i];
      for (std::size_t k = 0; k < K2; ++k)
        out << ',' << s.Bd2(k, i) << ',' << s.Bd2_prime(k, i) << ',' << s.Bd2_second(k, i) << ','
            << s.M_sum(k, i) << ',' << s.L(k, i) << ',' << s.Zt(k, i) << ','
            << s.eps3_tilde(k, i);
      out << ',' << int(s.clause_a_ok[i]);
    }
    out << '\n';
  }
}

}  // namespace adsst
