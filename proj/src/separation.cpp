// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/separation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

namespace adsst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKinkStep = 1e-6;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

struct Branch {
  double value = 0.0, deriv = 0.0;
  std::size_t k = 0;  // 1-based upper index
  bool smooth = true;
};

// Value and analytic derivative of the pair (k-1, k) term.
Branch pair_term(const MulticomponentModel& m, double alpha, SelectionRule rule,
                 std::size_t k, double t) {
  const auto& lo = m.components[k - 1];
  const auto& hi = m.components[k];
  const double b = hi.freq(t) - lo.freq(t);
  if (!(b > 0.0)) {
    std::ostringstream msg;
    msg << "instantaneous frequencies not increasing: phi'_" << k + 1 << " - phi'_" << k
        << " = " << b << " at t = " << t;
    throw SeparationError(t, k + 1, msg.str());
  }
  const double db = hi.chirp_rate(t) - lo.chirp_rate(t);
  Branch br;
  br.k = k + 1;
  if (rule == SelectionRule::sigma1) {
    br.value = 2.0 * alpha / b;
    br.deriv = -2.0 * alpha * db / (b * b);
    return br;
  }
  const double p1 = lo.chirp_rate(t), p2 = hi.chirp_rate(t);
  const double a = kTwoPi * alpha * (std::abs(p1) + std::abs(p2));
  double disc = b * b - 8.0 * alpha * a;
  // A discriminant within rounding of zero is the boundary case b^2 = 8 alpha a.
  if (disc < 0.0 && disc >= -1e-12 * b * b) disc = 0.0;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "sigma_2 infeasible for components " << k << " and " << k + 1 << " at t = " << t
        << ": b^2 - 8 alpha a = " << disc;
    throw SeparationError(t, k + 1, msg.str());
  }
  const double S = std::sqrt(disc);
  br.value = 4.0 * alpha / (b + S);
  if (S == 0.0) {
    br.smooth = false;
    return br;
  }
  const double da = kTwoPi * alpha * (sgn(p1) * lo.chirp_accel(t) + sgn(p2) * hi.chirp_accel(t));
  const double dS = (b * db - 4.0 * alpha * da) / S;
  br.deriv = -4.0 * alpha * (db + dS) / ((b + S) * (b + S));
  return br;
}

Branch active(const MulticomponentModel& m, double alpha, SelectionRule rule, double t) {
  Branch best;
  best.value = -kInf;
  for (std::size_t k = 1; k < m.size(); ++k) {
    Branch br = pair_term(m, alpha, rule, k, t);
    if (br.value > best.value) best = br;
  }
  return best;
}

SigmaProfile make_selection(const MulticomponentModel& m, double alpha, SelectionRule rule,
                            double default_sigma) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (m.size() < 2) return SigmaProfile::constant(default_sigma);
  auto model = std::make_shared<const MulticomponentModel>(m);
  auto value = [model, alpha, rule](double t) { return active(*model, alpha, rule, t).value; };
  auto deriv = [model, alpha, rule, value](double t) {
    const Branch c = active(*model, alpha, rule, t);
    const std::size_t kl = active(*model, alpha, rule, t - kKinkStep).k;
    const std::size_t kr = active(*model, alpha, rule, t + kKinkStep).k;
    if (c.smooth && kl == c.k && kr == c.k) return c.deriv;
    // Branch switch or zero discriminant: one-sided difference on the side
    // that keeps the current branch, forward otherwise.
    if (kl == c.k && kr != c.k) return (c.value - value(t - kKinkStep)) / kKinkStep;
    return (value(t + kKinkStep) - c.value) / kKinkStep;
  };
  std::ostringstream desc;
  desc << (rule == SelectionRule::sigma1 ? "sigma1" : "sigma2") << "(alpha=" << alpha << ")";
  return SigmaProfile::from_functions(value, deriv, desc.str());
}

}  // namespace

SigmaProfile sigma1(const MulticomponentModel& m, double alpha, double default_sigma) {
  return make_selection(m, alpha, SelectionRule::sigma1, default_sigma);
}

SigmaProfile sigma2(const MulticomponentModel& m, double alpha,
                    const std::vector<double>& check_times, double default_sigma) {
  if (m.size() >= 2)
    for (double t : check_times) active(m, alpha, SelectionRule::sigma2, t);
  return make_selection(m, alpha, SelectionRule::sigma2, default_sigma);
}

std::vector<BranchSwitch> branch_switches(const MulticomponentModel& m, double alpha,
                                          SelectionRule rule, const std::vector<double>& times) {
  std::vector<BranchSwitch> out;
  if (m.size() < 2) return out;
  std::size_t prev = 0;
  for (double t : times) {
    const std::size_t k = active(m, alpha, rule, t).k;
    if (prev != 0 && k != prev) out.push_back({t, prev, k});
    prev = k;
  }
  return out;
}

SigmaBracket sigma2_bracket(const MulticomponentModel& m, double alpha, double t) {
  SigmaBracket br{0.0, kInf};
  for (std::size_t k = 1; k < m.size(); ++k) {
    const double b = m.components[k].freq(t) - m.components[k - 1].freq(t);
    const double a = kTwoPi * alpha *
                     (std::abs(m.components[k - 1].chirp_rate(t)) + std::abs(m.components[k].chirp_rate(t)));
    double disc = b * b - 8.0 * alpha * a;
    if (disc < 0.0 && disc >= -1e-12 * b * b) disc = 0.0;
    if (!(b > 0.0) || disc < 0.0) return {kInf, 0.0};
    const double S = std::sqrt(disc);
    br.lower = std::max(br.lower, 4.0 * alpha / (b + S));
    if (b - S > 0.0) br.upper = std::min(br.upper, 4.0 * alpha / (b - S));
  }
  return br;
}

const char* zone_kind_name(ZoneKind k) {
  switch (k) {
    case ZoneKind::Z: return "Z";
    case ZoneKind::O: return "O";
    case ZoneKind::O_prime: return "O_prime";
  }
  return "?";
}

ZoneSet zones(const MulticomponentModel& m, const SigmaProfile& sigma, const WindowFamily& w,
              double tau0, ZoneKind kind, const std::vector<double>& times) {
  ZoneSet z;
  z.kind = kind;
  z.times = times;
  z.alpha = effective_support(w, tau0);
  const std::size_t K = m.size(), T = times.size();
  z.center = RMatrix(K, T);
  z.halfwidth = RMatrix(K, T);
  z.alpha_k = RMatrix(K, T, z.alpha);
  z.sigma.resize(T);
  for (std::size_t i = 0; i < T; ++i) {
    const double t = times[i], s = sigma(t);
    if (!(s > 0.0)) throw InvalidArgument("sigma must be positive");
    z.sigma[i] = s;
    for (std::size_t k = 0; k < K; ++k) {
      const auto& c = m.components[k];
      z.center(k, i) = c.freq(t);
      switch (kind) {
        case ZoneKind::Z: z.halfwidth(k, i) = z.alpha / s; break;
        case ZoneKind::O:
          z.alpha_k(k, i) = chirped_transform(w, s, c.chirp_rate(t), tau0).alpha();
          z.halfwidth(k, i) = z.alpha_k(k, i) / s;
          break;
        case ZoneKind::O_prime:
          z.halfwidth(k, i) = z.alpha / s * (1.0 + kTwoPi * std::abs(c.chirp_rate(t)) * s * s);
          break;
      }
    }
  }
  return z;
}

SeparationReport check_separation(const ZoneSet& z) {
  SeparationReport r;
  const std::size_t T = z.times.size();
  r.min_gap.assign(T, kInf);
  r.worst_gap = kInf;
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t k = 1; k < z.K(); ++k) {
      const double gap = (z.center(k, i) - z.halfwidth(k, i)) -
                         (z.center(k - 1, i) + z.halfwidth(k - 1, i));
      const double tol = 1e-12 * (std::abs(z.center(k, i)) + std::abs(z.center(k - 1, i)));
      r.min_gap[i] = std::min(r.min_gap[i], gap);
      if (gap < -tol) r.pass = false;
    }
    if (r.min_gap[i] < r.worst_gap) {
      r.worst_gap = r.min_gap[i];
      r.worst_time = z.times[i];
    }
  }
  return r;
}

SeparationReport check_separation(const ZoneSet& z, const MulticomponentModel& m) {
  SeparationReport r = check_separation(z);
  r.bracket_checked = true;
  const double alpha = z.alpha;
  for (std::size_t i = 0; i < z.times.size(); ++i) {
    const SigmaBracket br = sigma2_bracket(m, alpha, z.times[i]);
    const double s = z.sigma[i];
    const double slack = 1e-12 * s;
    if (!br.feasible() || s < br.lower - slack || s > br.upper + slack) {
      r.bracket_pass = false;
      r.bracket_fail_times.push_back(z.times[i]);
    }
  }
  return r;
}

std::string SeparationReport::summary() const {
  std::ostringstream out;
  out << "separation: " << (pass ? "pass" : "FAIL") << ", worst gap " << worst_gap
      << " Hz at t = " << worst_time;
  if (bracket_checked)
    out << "; sigma bracket: " << (bracket_pass ? "pass" : "FAIL") << " ("
        << bracket_fail_times.size() << " failing times)";
  return out.str();
}

LkResult l_k(const ZoneSet& z) {
  if (z.kind != ZoneKind::O) throw InvalidArgument("L_k is defined on O zones");
  LkResult out;
  const std::size_t K = z.K(), T = z.times.size();
  out.L = RMatrix(K, T);
  out.single_zone = K == 1;
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const double a = z.alpha_k(k, i);
      double best = kInf;
      if (K == 1) best = 2.0 * a;
      if (k > 0) best = std::min(best, a + z.alpha_k(k - 1, i));
      if (k + 1 < K) best = std::min(best, a + z.alpha_k(k + 1, i));
      out.L(k, i) = best / z.sigma[i];
    }
  return out;
}

void write_zone_csv(std::ostream& out, const ZoneSet& z) {
  out << "k,t,center,halfwidth\n" << std::setprecision(17);
  for (std::size_t k = 0; k < z.K(); ++k)
    for (std::size_t i = 0; i < z.times.size(); ++i)
      out << k + 1 << ',' << z.times[i] << ',' << z.center(k, i) << ',' << z.halfwidth(k, i)
          << '\n';
}

}  // namespace adsst
