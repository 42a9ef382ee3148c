// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adsst/phase_transform.hpp"
#include "adsst/separation.hpp"
#include "adsst/synchrosqueeze.hpp"

namespace adsst {

struct BoundOptions {
  // Points per zone (or per |u| < alpha interval) for the sups.
  int sup_samples = 1024;
  // Use the sup-|phi''|-dependent remainder constants instead of the
  // eps-Lipschitz ones.
  bool condition_b = false;
};

// Lambda_0 = K eps1 I1 + pi eps2 I2 sigma sum A, and Lambda~_0 with I~.
// The _b members hold the variant for |A'| <= eps1 phi', |phi''| <= eps2 phi',
// with M''_k taken as max |phi''_k| over `times`.
struct RemainderBounds {
  std::vector<double> Lambda0, Lambda0_tilde;
  std::vector<double> Lambda0_b, Lambda0_tilde_b;
};
RemainderBounds first_order_remainder_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                                             const WindowFamily& w, const std::vector<double>& times);

// Regular-transform constants (sigma = 1, eps factored out).
struct GammaBounds {
  std::vector<double> Gamma0, Gamma0_tilde;
  // Variant with phi'_k and M''_k weights.
  std::vector<double> Gamma0_wu, Gamma0_tilde_wu;
};
GammaBounds gamma_bounds(const MulticomponentModel& m, const WindowFamily& w,
                         const std::vector<double>& times);
// (eps / eps~)(Gamma0 alpha + Gamma~0 / 2 pi)
double theorem_a_bound(double Gamma0, double Gamma0_tilde, double alpha, double eps,
                       double eps_tilde);

struct ResidualBounds {
  std::vector<double> Pi0, Pi1, Pi2, Pi0_tilde, Pi1_tilde;
};
ResidualBounds second_order_residual_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                                            const WindowFamily& w, const std::vector<double>& times);

// eps~ = eps^(1/3) with eps the largest class constant of the model.
double cube_root_threshold(const MulticomponentModel& m);

struct Theorem1Bounds {
  std::vector<double> times, sigma;
  double alpha = 0.0, tau0 = 0.0, eps1_tilde = 0.0;
  RemainderBounds remainder;
  // bd1 = main + max_k cross_k.
  std::vector<double> bd1, bd1_main, bd1_cross;
  RMatrix bd1_cross_k;  // K x T
  RMatrix bd2;          // K x T
  RMatrix bd2_main;     // 2 alpha (sigma Lambda0 + eps~1) / |g(0)|
  RMatrix m_sum;        // sum_{l != k} A_l m_{l,k}
  std::vector<RMatrix> m;  // per time, m(l, k); diagonal unused
  double tail = 0.0;       // |int_{|u| >= alpha} g^|
  double tail_cap = 0.0;   // Gaussian closed-form cap; NaN for other windows
  std::vector<double> eps3_tilde;          // alpha / sigma
  std::vector<double> clause_a_lhs;        // sigma Lambda0 + tau0 sum A
  std::vector<unsigned char> clause_a_ok;  // eps~1 >= clause_a_lhs
  std::vector<unsigned char> clause_c_ok;  // bd1 <= alpha / sigma
  std::vector<std::string> flags;
};
Theorem1Bounds theorem1_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                               const WindowFamily& w, double tau0, double eps1_tilde,
                               const std::vector<double>& times, const BoundOptions& opt = {});

// Cross-component sums at (t, eta) for component k (0-based):
// B = sum x_l (phi'_l - phi'_k) G_{0,l}, D = sum x_l (phi''_l - phi''_k) G_{1,l},
// E = sum x_l (phi'_l - phi'_k) G_{1,l}, F = sum x_l (phi''_l - phi''_k) G_{2,l},
// with G_{j,l} evaluated at sigma (eta - phi'_l) under the l-th chirp rate.
struct CrossTerms {
  cplx B, D, E, F;
  double g1_envelope = 0.0;  // sum_l A_l |G_{1,l}|
};
CrossTerms cross_terms(const MulticomponentModel& m, const SigmaProfile& sigma,
                       const WindowFamily& w, double t, std::size_t k, double eta);

struct ErrEnvelope {
  double err1 = 0.0, err2 = 0.0;
};
// |Err1| <= 2pi|B| + 2pi sigma|D| + 2pi alpha_k Pi0 + Pi~0 + 2pi|phi''_k| sigma^2 Pi1,
// |Err2| <= 4pi^2 sigma|E| + 4pi^2 sigma^2|F| + 2pi sigma Pi0 + 4pi^2 alpha_k sigma Pi1
//           + 2pi sigma Pi~1 + 4pi^2 |phi''_k| sigma^3 Pi2.
ErrEnvelope err_envelope(const CrossTerms& c, double sigma, double alpha_k, double phi2_k,
                         double Pi0, double Pi1, double Pi2, double Pi0_tilde, double Pi1_tilde);

struct Theorem2Bounds {
  std::vector<double> times, sigma;
  double tau0 = 0.0, eps1_tilde = 0.0, eps2_tilde = 0.0;
  ResidualBounds residual;
  RMatrix alpha_k, L;   // K x T
  std::vector<double> Bd1;
  RMatrix Bd1_k;        // sup over O_k
  RMatrix Bd2, Bd2_prime, Bd2_second, M_sum, Zt, tail, tail_cap;
  std::vector<RMatrix> M;  // per time, M(l, k)
  RMatrix eps3_tilde;      // L_k / 2
  std::vector<unsigned char> clause_a_ok;  // eps~1 >= tau0 sum A + sigma Pi0
  std::vector<double> clause_a_lhs;
  Mask clause_c_ok;        // Bd1 <= L_k / 2
  bool zt_measured = false;
  bool from_bundle = false;
  std::vector<std::string> flags;
};
// Model envelopes stand in for |V_g1| and |d_eta V|; |Z_t| = 0 and flagged.
Theorem2Bounds theorem2_bounds(const MulticomponentModel& m, const SigmaProfile& sigma,
                               const WindowFamily& w, double tau0, double eps1_tilde,
                               double eps2_tilde, const std::vector<double>& times,
                               const BoundOptions& opt = {});
// Times, sigma and window from the bundle. The sup over O_k runs over the
// grid cells inside the zone, where |V_g1| and |d_eta V| are measured, and
// |Z_t| is counted on the grid.
Theorem2Bounds theorem2_bounds(const MulticomponentModel& m, const STFTBundle& b, double tau0,
                               double eps1_tilde, double eps2_tilde, const BoundOptions& opt = {});

// Err1 = d_t V - (i2pi phi'_k - r) V - i2pi phi''_k sigma V_g1 + r V_g3 at a
// bundle cell, r = sigma'/sigma; Err2 is its eta derivative assembled from
// the window-variant identities.
struct LemmaDefect {
  cplx err1, err2;
};
LemmaDefect lemma1_defect(const STFTBundle& b, std::size_t i, std::size_t j,
                          const ComponentProfile& c);

// Index of the component whose O_k contains eta, -1 when none does. Ties go
// to the nearer instantaneous frequency in units of the zone halfwidth.
long zone_of(const MulticomponentModel& m, const WindowFamily& w, double sigma, double tau0,
             double t, double eta);

struct Lemma1Report {
  std::size_t checked = 0;
  double max_defect = 0.0;
  double max_excess = 0.0;  // max(|Err1| - envelope), <= 0 when sound
  std::size_t violations = 0;
  bool pass = true;
};
// Interior cells inside some O_k are compared against the Err1 envelope with
// an absolute allowance `abs_tol` for quadrature roundoff.
Lemma1Report verify_lemma1(const STFTBundle& b, const MulticomponentModel& m, double tau0,
                           double abs_tol = 1e-8);

struct Lemma3Report {
  std::size_t checked = 0;
  // max |P0 - i2pi sigma phi''_k - Err3| / (|P0| + |i2pi sigma phi''_k| + |Err3|)
  double max_identity_rel = 0.0;
  // max |P0 - i2pi sigma phi''_k|, absolute and relative to |i2pi sigma phi''_k|
  double max_p0_dev = 0.0, max_p0_rel = 0.0;
};
// Cells as in p_zero (|V| > gamma1, |d_eta(V_g1/V)| > gamma2), interior
// frames, assigned to a zone.
Lemma3Report verify_lemma3(const STFTBundle& b, const MulticomponentModel& m, double tau0,
                           std::optional<double> gamma1 = std::nullopt,
                           std::optional<double> gamma2 = std::nullopt);

struct ComparisonRow {
  double t = 0.0;
  std::size_t covered = 0, uncovered = 0, overlapping = 0;  // cells with |V| > eps~1
  double if_error = 0.0, if_bound = 0.0;
  std::size_t if_cells = 0;
  bool recovery_checked = false;
  std::vector<double> rec_error, rec_bound;  // per component
  bool clause_a = true, clause_b = true, clause_c = true;
};
struct Comparison {
  int order = 1;
  std::vector<ComparisonRow> rows;  // interior frames
  bool clause_a = true, clause_b = true, clause_c = true;
  std::size_t recovery_frames = 0;
  std::vector<std::string> notes;
  bool pass() const { return clause_a && clause_b && clause_c; }
  std::string summary() const;
};
// First order: zones Z_k, mask |V| > eps~1, phase from omega_adaptive with
// gamma = eps~1. Recovery integrates the squeezed transform over
// |xi - phi'_k| < eps~3.
Comparison empirical_vs_bound(const MulticomponentModel& m, const STFTBundle& b,
                              const PhaseField& phase, const SqueezedTFR& s,
                              const Theorem1Bounds& r);
// Second order: zones O_k, mask |V| > eps~1 and |d_eta(V_g1/V)| > eps~2,
// phase from omega_adaptive_second with the same thresholds.
Comparison empirical_vs_bound(const MulticomponentModel& m, const STFTBundle& b,
                              const PhaseField& phase, const SqueezedTFR& s,
                              const Theorem2Bounds& r);
void write_comparison_csv(std::ostream& out, const Comparison& c);

// Everything evaluated on one time axis. Theorem parts are present when requested.
struct BoundReport {
  std::vector<double> times, sigma;
  RemainderBounds remainder;
  GammaBounds gamma;
  ResidualBounds residual;
  std::optional<Theorem1Bounds> first;
  std::optional<Theorem2Bounds> second;
};
void write_bound_report_csv(std::ostream& out, const BoundReport& r);

}  // namespace adsst
