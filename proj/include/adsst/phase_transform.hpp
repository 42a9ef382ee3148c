// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <optional>

#include "adsst/adaptive_stft.hpp"

namespace adsst {

enum class PhaseKind { first, second, adaptive_first, adaptive_second };
const char* phase_kind_name(PhaseKind k);

// Instantaneous-frequency estimate omega(t, eta) in Hz on the bundle grid.
struct PhaseField {
  TFGrid grid;
  RMatrix omega;
  Mask valid;
  // Cells that took the second-order branch (second and adaptive_second only).
  Mask second_branch;
  PhaseKind kind = PhaseKind::first;
  double gamma = 0.0;
  double gamma2 = 0.0;

  std::size_t valid_count() const;
};

// 1e-3 max|V|.
double default_gamma(const STFTBundle& b);
// 1e-4 median |d_eta(V_g1 / V)| over {|V| > gamma1}.
double default_gamma2(const STFTBundle& b, double gamma1);
// Tolerance on |d_t(d_eta V / V) - i 2 pi| for the regular second-order branch.
inline constexpr double kDefaultGamma2Prime = 1e-6 * kTwoPi;

// Re(d_t V / (i 2 pi V)).
PhaseField omega_first(const STFTBundle& b, std::optional<double> gamma = std::nullopt);
// Re(d_t V / (i 2 pi V)) + (sigma'/sigma) Re(V_g3 / (i 2 pi V)).
PhaseField omega_adaptive(const STFTBundle& b, std::optional<double> gamma = std::nullopt);
// Regular second order with q~. Expects constant sigma.
PhaseField omega_second(const STFTBundle& b, std::optional<double> gamma = std::nullopt,
                        double gamma2_prime = kDefaultGamma2Prime);

struct PZero {
  CMatrix P0;
  CMatrix dG1;  // d_eta(V_g1 / V)
  Mask valid;   // |V| > gamma1 and |dG1| > gamma2
  double gamma1 = 0.0, gamma2 = 0.0;
};
PZero p_zero(const STFTBundle& b, std::optional<double> gamma1 = std::nullopt,
             std::optional<double> gamma2 = std::nullopt);

// Two-branch thresholded transform: second order where both thresholds pass,
// first-order adaptive where only gamma1 passes.
PhaseField omega_adaptive_second(const STFTBundle& b, std::optional<double> gamma1 = std::nullopt,
                                 std::optional<double> gamma2 = std::nullopt);

// Per-cell building blocks, exposed for the bounds checks.
cplx omega_adaptive_complex(const STFTBundle& b, std::size_t i, std::size_t j);
cplx p_zero_value(const STFTBundle& b, std::size_t i, std::size_t j, cplx* dG1 = nullptr);

void write_phase_csv(std::ostream& out, const PhaseField& f);

}  // namespace adsst
