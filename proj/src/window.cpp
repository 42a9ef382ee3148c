// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/window.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "quadrature.hpp"

namespace adsst {

const char* variant_name(WindowVariant v) {
  switch (v) {
    case WindowVariant::g: return "g";
    case WindowVariant::g1: return "g1";
    case WindowVariant::g2: return "g2";
    case WindowVariant::g3: return "g3";
    case WindowVariant::gp: return "gp";
    case WindowVariant::g4: return "g4";
    case WindowVariant::gpp: return "gpp";
  }
  return "?";
}

double WindowFamily::variant(WindowVariant v, double t) const {
  switch (v) {
    case WindowVariant::g: return g(t);
    case WindowVariant::g1: return t * g(t);
    case WindowVariant::g2: return t * t * g(t);
    case WindowVariant::g3: return t * gp(t);
    case WindowVariant::gp: return gp(t);
    case WindowVariant::g4: return t * t * gp(t);
    case WindowVariant::gpp: return gpp(t);
  }
  return 0.0;
}

namespace {

// Integration range for moments and transforms, in units of the window scale.
constexpr double kQuadRadius = 40.0;

}  // namespace

std::shared_ptr<WindowFamily::State> WindowFamily::finish(std::shared_ptr<State> s) {
  s->g0 = s->g(0.0);
  if (s->g0 == 0.0) throw InvalidArgument("window must satisfy g(0) != 0");
  const auto* st = s.get();
  for (int n = 0; n < 6; ++n) {
    // Even integrands: twice the half-line integral.
    s->I[n] = 2.0 * detail::integrate(
                        [st, n](double t) { return std::pow(t, n) * std::abs(st->g(t)); }, 0.0,
                        kQuadRadius, 16, 1e-13);
    s->It[n] = 2.0 * detail::integrate(
                         [st, n](double t) { return std::pow(t, n) * std::abs(st->gp(t)); }, 0.0,
                         kQuadRadius, 16, 1e-13);
    if (!(s->I[n] > 0.0) || !std::isfinite(s->I[n]) || !(s->It[n] > 0.0) ||
        !std::isfinite(s->It[n]))
      throw InvalidArgument("window moments must be finite and positive");
  }
  if (!s->fourier) {
    const double R = s->radius;
    Fn g = s->g;
    s->fourier = [g, R](double xi) {
      return 2.0 * detail::integrate(
                       [&](double t) { return g(t) * std::cos(kTwoPi * xi * t); }, 0.0, R, 16,
                       1e-13);
    };
  }
  return s;
}

WindowFamily WindowFamily::gaussian() {
  static const std::shared_ptr<const State> shared = [] {
    auto s = std::make_shared<State>();
    const double c = 1.0 / std::sqrt(kTwoPi);
    s->id = "gaussian";
    s->gaussian = true;
    s->g = [c](double t) { return c * std::exp(-0.5 * t * t); };
    s->gp = [c](double t) { return -t * c * std::exp(-0.5 * t * t); };
    s->gpp = [c](double t) { return (t * t - 1.0) * c * std::exp(-0.5 * t * t); };
    s->fourier = [](double xi) { return std::exp(-2.0 * kPi * kPi * xi * xi); };
    s->radius = 10.0;
    return std::shared_ptr<const State>(finish(s));
  }();
  return WindowFamily(shared);
}

WindowFamily WindowFamily::hyperbolic_secant() {
  static const std::shared_ptr<const State> shared = [] {
    auto s = std::make_shared<State>();
    s->id = "sech";
    s->g = [](double t) { return 1.0 / std::cosh(kPi * t); };
    s->gp = [](double t) { return -kPi * std::tanh(kPi * t) / std::cosh(kPi * t); };
    s->gpp = [](double t) {
      const double sh = 1.0 / std::cosh(kPi * t);
      const double th = std::tanh(kPi * t);
      return kPi * kPi * sh * (th * th - sh * sh);
    };
    s->fourier = [](double xi) { return 1.0 / std::cosh(kPi * xi); };
    s->radius = 12.0;
    return std::shared_ptr<const State>(finish(s));
  }();
  return WindowFamily(shared);
}

WindowFamily WindowFamily::custom(std::string id, Fn g, Fn gp, Fn gpp, double radius,
                                  Fn fourier) {
  if (!(radius > 0.0)) throw InvalidArgument("window truncation radius must be positive");
  auto s = std::make_shared<State>();
  s->id = std::move(id);
  s->g = std::move(g);
  s->gp = std::move(gp);
  s->gpp = std::move(gpp);
  s->fourier = std::move(fourier);
  s->radius = radius;
  return WindowFamily(finish(s));
}

WindowFamily gaussian_family() { return WindowFamily::gaussian(); }

bool WindowFamily::fourier_even_decreasing(double xi_max, int n) const {
  double prev = std::abs(fourier(0.0));
  for (int i = 1; i <= n; ++i) {
    const double xi = xi_max * i / n;
    const double cur = std::abs(fourier(xi));
    if (cur > prev * (1.0 + 1e-12) + 1e-300) return false;
    if (std::abs(std::abs(fourier(-xi)) - cur) > 1e-12 * (cur + 1e-300)) return false;
    prev = cur;
  }
  return true;
}

namespace {

// Largest root of f(xi) = tau0 on xi >= 0 for a function with f(0) > tau0 that
// decays to zero. Also reports whether the samples were nonincreasing.
double largest_root(const std::function<double(double)>& f, double tau0, bool& monotone) {
  double hi = 0.5;
  while (f(hi) >= tau0 * 1e-3 || f(2.0 * hi) >= tau0 * 1e-3) {
    hi *= 2.0;
    if (hi > 1e6) throw SupportUndefined("effective support does not decay below tau0");
  }
  const int n = 4096;
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = f(hi * i / n);
  monotone = true;
  for (int i = 1; i <= n; ++i)
    if (v[i] > v[i - 1] * (1.0 + 1e-10)) monotone = false;
  int last = -1;
  for (int i = 0; i <= n; ++i)
    if (v[i] >= tau0) last = i;
  if (last < 0) throw SupportUndefined("|transform| never reaches tau0");
  double a = hi * last / n, b = hi * (last + 1) / n;
  for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
    const double m = 0.5 * (a + b);
    (f(m) >= tau0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

double effective_support(const WindowFamily& w, double tau0) {
  if (!(tau0 > 0.0 && tau0 < 1.0)) throw InvalidArgument("tau0 must lie in (0, 1)");
  if (w.is_gaussian()) return std::sqrt(2.0 * std::log(1.0 / tau0)) / kTwoPi;
  bool mono = true;
  return largest_root([&w](double xi) { return std::abs(w.fourier(xi)); }, tau0, mono);
}

ChirpedWindowTransform chirped_transform(const WindowFamily& w, double sigma, double phi2,
                                         double tau0) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(tau0 > 0.0 && tau0 < 1.0)) throw InvalidArgument("tau0 must lie in (0, 1)");
  ChirpedWindowTransform tr;
  tr.sigma_ = sigma;
  tr.phi2_ = phi2;
  tr.mu_ = kTwoPi * phi2 * sigma * sigma;
  tr.tau0_ = tau0;
  tr.closed_form_ = w.is_gaussian();
  if (!tr.closed_form_) {
    // The integrand is smooth and decays fast, so the trapezoid rule converges
    // geometrically; its aliasing error is |G(xi +- 1/h)|. The step resolves
    // both the window and the chirp's sweep across the truncation radius.
    const double R = w.truncation_radius();
    const double h = std::min(1.0 / 64.0, 1.0 / (16.0 * (1.0 + std::abs(tr.mu_) * R / kTwoPi)));
    const auto n = static_cast<long>(std::floor(R / h));
    auto nodes = std::make_shared<std::vector<double>>();
    auto weights = std::make_shared<std::vector<cplx>>();
    for (long k = -n; k <= n; ++k) {
      const double t = static_cast<double>(k) * h;
      nodes->push_back(t);
      weights->push_back(h * w.g(t) * std::polar(1.0, 0.5 * tr.mu_ * t * t));
    }
    tr.nodes_ = std::move(nodes);
    tr.weights_ = std::move(weights);
  }
  const double q = 1.0 + tr.mu_ * tr.mu_;
  if (tr.closed_form_) {
    if (tau0 * std::pow(q, 0.25) > 1.0)
      throw SupportUndefined("tau0 (1 + mu^2)^(1/4) > 1: |G_k| never reaches tau0");
    tr.alpha_ = std::sqrt(q) / kTwoPi * std::sqrt(2.0 * std::log(1.0 / tau0) - 0.5 * std::log(q));
    tr.monotone_ = true;
  } else {
    tr.alpha_ = largest_root([&tr](double xi) { return std::abs(tr.g_j(0, xi)); }, tau0,
                             tr.monotone_);
  }
  return tr;
}

cplx ChirpedWindowTransform::g_j(int j, double xi) const {
  if (j < 0 || j > 2) throw InvalidArgument("G_{j,k} is provided for j = 0, 1, 2");
  if (closed_form_) {
    const cplx s{1.0, -mu_};
    const cplx a = 2.0 * kPi * kPi / s;
    const cplx G = std::exp(-a * xi * xi) / std::sqrt(s);
    if (j == 0) return G;
    const cplx scale = cplx{0.0, -kTwoPi};
    if (j == 1) return -2.0 * a * xi * G / scale;
    return (4.0 * a * a * xi * xi - 2.0 * a) * G / (scale * scale);
  }
  const auto& t = *nodes_;
  const auto& wt = *weights_;
  // exp(-i 2 pi xi tau_n) by recurrence from the uniform node spacing.
  const double h = t.size() > 1 ? t[1] - t[0] : 1.0;
  const cplx step = std::polar(1.0, -kTwoPi * xi * h);
  cplx e = std::polar(1.0, -kTwoPi * xi * t.front());
  cplx acc{};
  for (std::size_t n = 0; n < t.size(); ++n) {
    const double tj = j == 0 ? 1.0 : (j == 1 ? t[n] : t[n] * t[n]);
    acc += wt[n] * tj * e;
    e *= step;
    if ((n & 255) == 255) e = std::polar(1.0, -kTwoPi * xi * t[n + 1 < t.size() ? n + 1 : n]);
  }
  return acc;
}

}  // namespace adsst
