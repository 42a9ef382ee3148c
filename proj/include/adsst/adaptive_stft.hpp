// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adsst/signal_model.hpp"
#include "adsst/window.hpp"

namespace adsst {

// Time-varying window width sigma(t) in seconds and its derivative.
class SigmaProfile {
 public:
  using Fn = std::function<double(double)>;

  static SigmaProfile constant(double s);
  // sigma(t) = a + b t
  static SigmaProfile linear(double a, double b);
  // When `derivative` is empty sigma' comes from central differences with
  // step h and the profile is flagged.
  static SigmaProfile from_functions(Fn value, Fn derivative, std::string description,
                                     double h = 1e-6);

  double operator()(double t) const { return value_(t); }
  double derivative(double t) const { return derivative_(t); }
  const std::string& description() const { return description_; }
  bool is_constant() const { return constant_; }
  bool numeric_derivative() const { return numeric_; }

 private:
  Fn value_, derivative_;
  std::string description_;
  bool constant_ = false;
  bool numeric_ = false;
};

struct StftOptions {
  // Window truncation radius in units of sigma(t); <= 0 picks the window default.
  double truncation_radius = 0.0;
};

// Co-registered adaptive STFT matrices on one grid. Rows are frames.
struct STFTBundle {
  TFGrid grid;
  CMatrix V, V_g1, V_g2, V_g3, V_gp, V_g4, V_gpp;
  CMatrix dV_dt, dV_deta;
  std::vector<double> sigma_t;        // sigma at each frame
  std::vector<double> sigma_rate_t;   // sigma'/sigma at each frame
  SigmaProfile sigma = SigmaProfile::constant(1.0);
  WindowFamily window = gaussian_family();
  std::vector<unsigned char> edge;    // frame's truncated window leaves the record
  bool source_real = false;
  std::vector<std::string> warnings;

  const CMatrix& variant(WindowVariant v) const;
  bool interior(std::size_t frame) const { return edge[frame] == 0; }
};

STFTBundle compute_bundle(const SampledSignal& x, const SigmaProfile& sigma,
                          const WindowFamily& window, const TFGrid& grid,
                          const StftOptions& opt = {});

// Brute-force trapezoidal evaluation, one (t, eta) at a time, for any variant.
cplx direct_stft_value(const SampledSignal& x, const SigmaProfile& sigma,
                       const WindowFamily& window, double t, double eta,
                       WindowVariant variant = WindowVariant::g, double radius = 0.0);
CMatrix direct_stft_oracle(const SampledSignal& x, const SigmaProfile& sigma,
                           const WindowFamily& window, const TFGrid& grid,
                           WindowVariant variant = WindowVariant::g, double radius = 0.0);

// x(t) = (sigma(t)/g(0)) sum_eta V(t, eta) d_eta at each frame; the result is
// sampled on the grid's time axis.
SampledSignal reconstruct(const STFTBundle& b);
// Real input: 2/g(0) Re of the positive-frequency part, with sigma(t) prefactor.
SampledSignal reconstruct_real(const STFTBundle& b);

// Second-order quantities assembled from the window-variant identities.
struct CellDerivatives {
  cplx dVg1_deta;   // -i2pi sigma V_g2
  cplx dVg3_deta;   // -i2pi sigma V_g4
  cplx dVgp_deta;   // -i2pi sigma V_g3
  cplx d2V_deta_dt; // d_eta d_t V
  cplx d2V_dt2;     // only meaningful for constant sigma
};
CellDerivatives cell_derivatives(const STFTBundle& b, std::size_t i, std::size_t j);

// TFR export: row-major complex pairs plus a text sidecar "<path>.hdr".
enum class TfrPrecision { complex64, complex128 };
void write_tfr(const std::string& path, const CMatrix& m, const std::vector<double>& times,
               const std::vector<double>& freqs, const std::string& window_id,
               const std::string& sigma_description,
               TfrPrecision precision = TfrPrecision::complex128);
struct TfrFile {
  CMatrix values;
  std::vector<double> times, freqs;
  std::string window_id, sigma_description;
};
TfrFile read_tfr(const std::string& path);
void write_tfr_csv(std::ostream& out, const CMatrix& m, const std::vector<double>& times,
                   const std::vector<double>& freqs);

}  // namespace adsst
