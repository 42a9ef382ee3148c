// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>
#include <vector>

#include "adsst/types.hpp"

namespace adsst::detail {

// Bluestein chirp-z transform X_m = sum_n a_n exp(-i 2 pi beta n m) for
// n < n_in, m < n_out, evaluated with one pair of FFTW transforms.
class ChirpZ {
 public:
  ChirpZ(std::size_t n_in, std::size_t n_out, double beta);
  ~ChirpZ();
  ChirpZ(const ChirpZ&) = delete;
  ChirpZ& operator=(const ChirpZ&) = delete;

  std::size_t n_in() const { return n_; }
  std::size_t n_out() const { return m_; }
  void operator()(const cplx* in, cplx* out);

 private:
  struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  using Buffer = std::unique_ptr<fftw_complex[], FftwFree>;

  std::size_t n_, m_, len_;
  std::vector<cplx> chirp_;
  Buffer buf_, kernel_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

}  // namespace adsst::detail
