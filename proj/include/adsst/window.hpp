// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "adsst/types.hpp"

namespace adsst {

// Window variants that enter the transform. With w' the derivative of w:
//   g1 = t g,  g2 = t^2 g,  g3 = t g',  gp = g',  g4 = t^2 g',  gpp = g''.
enum class WindowVariant { g, g1, g2, g3, gp, g4, gpp };
inline constexpr std::array<WindowVariant, 7> kAllVariants = {
    WindowVariant::g,  WindowVariant::g1, WindowVariant::g2, WindowVariant::g3,
    WindowVariant::gp, WindowVariant::g4, WindowVariant::gpp};
const char* variant_name(WindowVariant v);

class WindowFamily {
 public:
  using Fn = std::function<double(double)>;

  static WindowFamily gaussian();
  // sech(pi t): unit mass, self-dual under the Fourier transform.
  static WindowFamily hyperbolic_secant();
  // A real even window given by g, g', g''. The Fourier transform is integrated
  // numerically when not supplied. `radius` truncates all integrals.
  static WindowFamily custom(std::string id, Fn g, Fn gp, Fn gpp, double radius,
                             Fn fourier = nullptr);

  const std::string& id() const { return s_->id; }
  bool is_gaussian() const { return s_->gaussian; }

  double g(double t) const { return s_->g(t); }
  double gp(double t) const { return s_->gp(t); }
  double gpp(double t) const { return s_->gpp(t); }
  double variant(WindowVariant v, double t) const;
  double fourier(double xi) const { return s_->fourier(xi); }

  double g0() const { return s_->g0; }
  double moment(int n) const { return s_->I.at(static_cast<std::size_t>(n)); }
  double derivative_moment(int n) const { return s_->It.at(static_cast<std::size_t>(n)); }
  double one_norm() const { return s_->I[0]; }
  // Time-domain truncation radius in units of sigma.
  double truncation_radius() const { return s_->radius; }

  // Samples |g^| on [0, xi_max] and reports whether it is nonincreasing.
  bool fourier_even_decreasing(double xi_max, int n = 4096) const;

 private:
  struct State {
    std::string id;
    bool gaussian = false;
    Fn g, gp, gpp, fourier;
    double g0 = 0.0;
    double radius = 0.0;
    std::array<double, 6> I{}, It{};
  };
  explicit WindowFamily(std::shared_ptr<const State> s) : s_(std::move(s)) {}
  static std::shared_ptr<State> finish(std::shared_ptr<State> s);
  std::shared_ptr<const State> s_;
};

WindowFamily gaussian_family();

// alpha with |g^(alpha)| = tau0.
double effective_support(const WindowFamily& w, double tau0);

class SupportUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Fourier transform of the chirp-modulated window exp(i pi s^2 phi'' t^2) g(t),
// G_k(xi), and its scaled derivatives G_{j,k} = G_k^{(j)} / (-i 2 pi)^j.
class ChirpedWindowTransform {
 public:
  double sigma() const { return sigma_; }
  double phi2() const { return phi2_; }
  // 2 pi phi'' sigma^2
  double mu() const { return mu_; }
  double tau0() const { return tau0_; }
  double alpha() const { return alpha_; }
  // False when |G_k| failed the sampled even-decreasing check; alpha is then
  // the largest root of |G_k| = tau0.
  bool monotone() const { return monotone_; }

  cplx value(double xi) const { return g_j(0, xi); }
  cplx g_j(int j, double xi) const;

 private:
  friend ChirpedWindowTransform chirped_transform(const WindowFamily&, double, double, double);
  double sigma_ = 0.0, phi2_ = 0.0, mu_ = 0.0, tau0_ = 0.0, alpha_ = 0.0;
  bool monotone_ = true;
  bool closed_form_ = true;
  // Trapezoid nodes tau_n and weights h g(tau_n) exp(i mu tau_n^2 / 2) for the
  // numeric path.
  std::shared_ptr<const std::vector<double>> nodes_;
  std::shared_ptr<const std::vector<cplx>> weights_;
};

ChirpedWindowTransform chirped_transform(const WindowFamily& w, double sigma, double phi2,
                                         double tau0);

inline cplx g_jk(const ChirpedWindowTransform& tr, int j, double xi) { return tr.g_j(j, xi); }

}  // namespace adsst
