// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "chirp_z.hpp"

#include <algorithm>
#include <cmath>

namespace adsst::detail {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

cplx* as_cplx(fftw_complex* p) { return reinterpret_cast<cplx*>(p); }

}  // namespace

ChirpZ::ChirpZ(std::size_t n_in, std::size_t n_out, double beta)
    : n_(n_in), m_(n_out), len_(next_pow2(n_in + n_out - 1)) {
  if (n_in == 0 || n_out == 0) throw InvalidArgument("chirp-z sizes must be positive");
  const std::size_t nc = std::max(n_, m_);
  chirp_.resize(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    // exp(-i pi beta k^2), reduced mod 2 in extended precision
    const long double kk = static_cast<long double>(k) * static_cast<long double>(k);
    const long double turns = std::fmod(static_cast<long double>(beta) * kk, 2.0L);
    chirp_[k] = std::polar(1.0, -kPi * static_cast<double>(turns));
  }
  buf_.reset(fftw_alloc_complex(len_));
  kernel_.reset(fftw_alloc_complex(len_));
  fwd_ = fftw_plan_dft_1d(static_cast<int>(len_), buf_.get(), buf_.get(), FFTW_FORWARD,
                          FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(len_), buf_.get(), buf_.get(), FFTW_BACKWARD,
                          FFTW_ESTIMATE);
  cplx* k = as_cplx(kernel_.get());
  std::fill(k, k + len_, cplx{});
  for (std::size_t i = 0; i < m_; ++i) k[i] = std::conj(chirp_[i]);
  for (std::size_t i = 1; i < n_; ++i) k[len_ - i] = std::conj(chirp_[i]);
  fftw_execute_dft(fwd_, kernel_.get(), kernel_.get());
}

ChirpZ::~ChirpZ() {
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void ChirpZ::operator()(const cplx* in, cplx* out) {
  cplx* b = as_cplx(buf_.get());
  for (std::size_t i = 0; i < n_; ++i) b[i] = in[i] * chirp_[i];
  std::fill(b + n_, b + len_, cplx{});
  fftw_execute(fwd_);
  const cplx* k = as_cplx(kernel_.get());
  for (std::size_t i = 0; i < len_; ++i) b[i] *= k[i];
  fftw_execute(bwd_);
  const double scale = 1.0 / static_cast<double>(len_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = b[i] * chirp_[i] * scale;
}

}  // namespace adsst::detail
