// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/synchrosqueeze.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace adsst {

double squeeze_kernel(KernelKind k, double t) {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  if (k == KernelKind::triangle) return 1.0 - a;
  const double u = 1.0 - t * t;
  return 15.0 / 16.0 * u * u;
}

long xi_bin(const std::vector<double>& axis, double xi) {
  if (axis.size() < 2 || !std::isfinite(xi)) return -1;
  const double d = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  // Bin m covers [xi_m - d/2, xi_m + d/2).
  const double pos = std::floor((xi - axis.front()) / d + 0.5);
  if (pos < 0.0 || pos >= static_cast<double>(axis.size())) return -1;
  return static_cast<long>(pos);
}

SqueezedTFR squeeze(const STFTBundle& b, const PhaseField& phase, const SqueezeParams& p) {
  if (phase.omega.rows() != b.V.rows() || phase.omega.cols() != b.V.cols() ||
      phase.grid.times != b.grid.times || phase.grid.freqs != b.grid.freqs)
    throw InvalidArgument("phase field and bundle live on different grids");
  if (!(p.lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  if (b.grid.n_freqs() < 2) throw InvalidArgument("squeezing needs at least two frequency bins");

  SqueezedTFR s;
  s.params = p;
  s.source = phase.kind;
  s.grid.times = b.grid.times;
  s.grid.freqs = p.out_bins.empty() ? b.grid.freqs : p.out_bins;
  s.grid.validate();
  if (s.grid.n_freqs() < 2) throw InvalidArgument("xi axis needs at least two bins");
  const std::size_t T = b.V.rows(), M = s.grid.n_freqs();
  s.R = CMatrix(T, M);
  s.overflow.assign(T, cplx{});
  const double deta = b.grid.deta(), dxi = s.dxi();
  const double x0 = s.grid.freqs.front();
  const bool second_only = phase.kind == PhaseKind::adaptive_second;

  std::ostringstream prov;
  prov << "phase=" << phase_kind_name(phase.kind) << " gamma=" << phase.gamma
       << " gamma2=" << phase.gamma2 << " lambda=" << p.lambda << " kernel="
       << (p.kernel == KernelKind::triangle ? "triangle" : "quartic_bump");
  s.provenance = prov.str();

  for (std::size_t i = 0; i < T; ++i) {
    cplx* row = s.R.row(i);
    for (std::size_t j = 0; j < b.V.cols(); ++j) {
      if (!phase.valid(i, j)) continue;
      if (second_only && !phase.second_branch(i, j)) continue;
      const double w = phase.omega(i, j);
      const cplx mass = b.V(i, j) * deta;
      if (p.lambda == 0.0) {
        const long m = xi_bin(s.grid.freqs, w);
        if (m < 0)
          s.overflow[i] += mass;
        else
          row[m] += mass / dxi;
        continue;
      }
      const double lo = std::ceil((w - p.lambda - x0) / dxi);
      const double hi = std::floor((w + p.lambda - x0) / dxi);
      if (xi_bin(s.grid.freqs, w) < 0) s.overflow[i] += mass;
      const long m0 = static_cast<long>(std::max(lo, 0.0));
      const long m1 = static_cast<long>(std::min(hi, static_cast<double>(M) - 1.0));
      for (long m = m0; m <= m1; ++m)
        row[m] += mass * (squeeze_kernel(p.kernel, (s.grid.freqs[m] - w) / p.lambda) / p.lambda);
    }
  }
  return s;
}

RecoveredComponent recover_component(const SqueezedTFR& s, const std::vector<double>& ridge,
                                     const std::vector<double>& halfwidth,
                                     const std::vector<double>& sigma_t,
                                     const WindowFamily& window) {
  const std::size_t T = s.R.rows();
  if (ridge.size() != T || halfwidth.size() != T || sigma_t.size() != T)
    throw InvalidArgument("ridge, halfwidth and sigma must have one entry per frame");
  RecoveredComponent out;
  out.signal.samples.assign(T, cplx{});
  out.empty_band.assign(T, 0);
  out.signal.t0 = T ? s.grid.times.front() : 0.0;
  out.signal.sample_rate = T > 1 ? 1.0 / s.grid.dt() : 1.0;
  const double dxi = s.dxi();
  for (std::size_t i = 0; i < T; ++i) {
    if (!std::isfinite(ridge[i]) || !std::isfinite(halfwidth[i]))
      throw InvalidArgument("ridge and halfwidth must be finite");
    cplx acc{};
    bool any = false;
    for (std::size_t m = 0; m < s.grid.n_freqs(); ++m) {
      if (std::abs(s.grid.freqs[m] - ridge[i]) < halfwidth[i]) {
        acc += s.R(i, m);
        any = true;
      }
    }
    out.empty_band[i] = any ? 0 : 1;
    out.signal.samples[i] = sigma_t[i] / window.g0() * acc * dxi;
  }
  return out;
}

namespace {

// out[m] = min_q f[q] + p (m - q)^2 with the minimizing q in arg[m].
// Lower envelope of parabolas, linear time.
void quadratic_transform(const std::vector<double>& f, double p, std::vector<double>& out,
                         std::vector<std::size_t>& arg) {
  const std::size_t n = f.size();
  out.assign(n, 0.0);
  arg.assign(n, 0);
  if (p <= 0.0) {
    const auto it = std::min_element(f.begin(), f.end());
    std::fill(out.begin(), out.end(), *it);
    std::fill(arg.begin(), arg.end(), static_cast<std::size_t>(it - f.begin()));
    return;
  }
  std::vector<std::size_t> v(n);
  std::vector<double> z(n + 1);
  std::size_t k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto meet = [&](std::size_t q, std::size_t r) {
    const double dq = static_cast<double>(q), dr = static_cast<double>(r);
    return ((f[q] + p * dq * dq) - (f[r] + p * dr * dr)) / (2.0 * p * (dq - dr));
  };
  for (std::size_t q = 1; q < n; ++q) {
    double sq = meet(q, v[k]);
    while (sq <= z[k]) {
      --k;
      sq = meet(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = sq;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (std::size_t m = 0; m < n; ++m) {
    while (z[k + 1] < static_cast<double>(m)) ++k;
    const double d = static_cast<double>(m) - static_cast<double>(v[k]);
    out[m] = f[v[k]] + p * d * d;
    arg[m] = v[k];
  }
}

}  // namespace

RidgeSet extract_ridges(const SqueezedTFR& s, std::size_t K, double penalty) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (!(penalty >= 0.0)) throw InvalidArgument("smoothness penalty must be nonnegative");
  RidgeSet rs;
  const std::size_t T = s.R.rows(), M = s.R.cols();
  if (T == 0 || M == 0) return rs;
  RMatrix E(T, M);
  double emax = 0.0;
  for (std::size_t k = 0; k < E.size(); ++k) {
    E.data()[k] = std::norm(s.R.data()[k]);
    emax = std::max(emax, E.data()[k]);
  }
  if (emax == 0.0) {
    rs.diagnostics.push_back("no energy in the squeezed representation");
    return rs;
  }
  const double floor = 1e-12 * emax;
  // A pass needs some cell above 1e-6 of the peak energy (1e-3 in magnitude).
  const double energetic = 1e-6 * emax;

  for (std::size_t pass = 0; pass < K; ++pass) {
    if (*std::max_element(E.data().begin(), E.data().end()) <= energetic) {
      std::ostringstream msg;
      msg << "found " << pass << " of " << K << " ridges; remaining energy below threshold";
      rs.diagnostics.push_back(msg.str());
      break;
    }
    // Minimize sum_t -log(E + floor) + penalty (jump)^2.
    std::vector<std::vector<std::size_t>> back(T);
    std::vector<double> D(M), tmp;
    for (std::size_t m = 0; m < M; ++m) D[m] = -std::log(E(0, m) + floor);
    for (std::size_t i = 1; i < T; ++i) {
      quadratic_transform(D, penalty, tmp, back[i]);
      for (std::size_t m = 0; m < M; ++m) D[m] = tmp[m] - std::log(E(i, m) + floor);
    }
    Ridge r;
    r.bin.assign(T, 0);
    r.bin[T - 1] = static_cast<std::size_t>(std::min_element(D.begin(), D.end()) - D.begin());
    for (std::size_t i = T - 1; i > 0; --i) r.bin[i - 1] = back[i][r.bin[i]];
    // Local refinement: climb to the nearest local maximum of E.
    for (std::size_t i = 0; i < T; ++i) {
      std::size_t m = r.bin[i];
      while (true) {
        if (m + 1 < M && E(i, m + 1) > E(i, m)) ++m;
        else if (m > 0 && E(i, m - 1) > E(i, m)) --m;
        else break;
      }
      r.bin[i] = m;
    }
    r.xi.resize(T);
    double sum = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
      r.xi[i] = s.grid.freqs[r.bin[i]];
      sum += r.xi[i];
    }
    r.mean_freq = sum / static_cast<double>(T);
    // Erase the ridge down to the surrounding minima.
    for (std::size_t i = 0; i < T; ++i) {
      const std::size_t c = r.bin[i];
      std::size_t lo = c, hi = c;
      while (lo > 0 && E(i, lo - 1) <= E(i, lo) && E(i, lo - 1) > 0.0) --lo;
      while (hi + 1 < M && E(i, hi + 1) <= E(i, hi) && E(i, hi + 1) > 0.0) ++hi;
      for (std::size_t m = lo; m <= hi; ++m) E(i, m) = 0.0;
    }
    rs.ridges.push_back(std::move(r));
  }
  std::sort(rs.ridges.begin(), rs.ridges.end(),
            [](const Ridge& a, const Ridge& b) { return a.mean_freq < b.mean_freq; });
  return rs;
}

void write_ridge_csv(std::ostream& out, const std::vector<double>& times, const Ridge& r) {
  out << "t,xi\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.xi.size(); ++i) out << times[i] << ',' << r.xi[i] << '\n';
}

}  // namespace adsst
