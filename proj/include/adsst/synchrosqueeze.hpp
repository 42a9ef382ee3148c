// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adsst/phase_transform.hpp"

namespace adsst {

enum class KernelKind { quartic_bump, triangle };

// h on [-1, 1] with unit mass.
double squeeze_kernel(KernelKind k, double t);

struct SqueezeParams {
  // Kernel width in Hz; 0 selects the binning limit.
  double lambda = 0.0;
  KernelKind kernel = KernelKind::quartic_bump;
  // Output frequency axis (uniform). Empty means the bundle's eta axis.
  std::vector<double> out_bins;
};

struct SqueezedTFR {
  TFGrid grid;  // freqs holds the xi axis
  CMatrix R;
  // Per frame: sum of V d_eta whose omega fell outside the xi axis.
  std::vector<cplx> overflow;
  PhaseKind source = PhaseKind::first;
  SqueezeParams params;
  std::string provenance;

  double dxi() const { return grid.deta(); }
};

// Reassigns V d_eta to xi = omega(t, eta) on the phase field's valid cells.
// For adaptive_second fields only the cells on the second-order branch
// contribute, which is the integration domain of the thresholded transform.
SqueezedTFR squeeze(const STFTBundle& b, const PhaseField& phase, const SqueezeParams& p = {});

// Bin of xi on a uniform axis with centered, left-closed bins; -1 when outside.
long xi_bin(const std::vector<double>& axis, double xi);

struct RecoveredComponent {
  SampledSignal signal;
  std::vector<unsigned char> empty_band;  // frame had no bin inside the band
};

// x_k(t) = (sigma(t)/g(0)) sum_{|xi - ridge(t)| < halfwidth(t)} R(t, xi) d_xi.
RecoveredComponent recover_component(const SqueezedTFR& s, const std::vector<double>& ridge,
                                     const std::vector<double>& halfwidth,
                                     const std::vector<double>& sigma_t,
                                     const WindowFamily& window);

struct Ridge {
  std::vector<std::size_t> bin;
  std::vector<double> xi;
  double mean_freq = 0.0;
};
struct RidgeSet {
  std::vector<Ridge> ridges;  // ordered by mean frequency
  std::vector<std::string> diagnostics;
};

// Greedy penalized-argmax ridges: each pass maximizes
// sum_t log(|R|^2 + floor) - penalty (bin_t - bin_{t-1})^2, refines each point to
// the local maximum and erases the ridge's energy down to the surrounding
// minima before the next pass.
RidgeSet extract_ridges(const SqueezedTFR& s, std::size_t K, double penalty = 0.05);

void write_ridge_csv(std::ostream& out, const std::vector<double>& times, const Ridge& r);

}  // namespace adsst
