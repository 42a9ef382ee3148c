// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/adaptive_stft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "chirp_z.hpp"

namespace adsst {

SigmaProfile SigmaProfile::constant(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("sigma must be positive and finite");
  SigmaProfile p;
  p.value_ = [s](double) { return s; };
  p.derivative_ = [](double) { return 0.0; };
  std::ostringstream os;
  os << std::setprecision(17) << "constant " << s;
  p.description_ = os.str();
  p.constant_ = true;
  return p;
}

SigmaProfile SigmaProfile::linear(double a, double b) {
  if (b == 0.0) return constant(a);
  SigmaProfile p;
  p.value_ = [a, b](double t) { return a + b * t; };
  p.derivative_ = [b](double) { return b; };
  std::ostringstream os;
  os << std::setprecision(17) << "linear " << a << ' ' << b;
  p.description_ = os.str();
  return p;
}

SigmaProfile SigmaProfile::from_functions(Fn value, Fn derivative, std::string description,
                                          double h) {
  SigmaProfile p;
  p.value_ = std::move(value);
  if (derivative) {
    p.derivative_ = std::move(derivative);
  } else {
    Fn v = p.value_;
    p.derivative_ = [v, h](double t) { return (v(t + h) - v(t - h)) / (2.0 * h); };
    p.numeric_ = true;
  }
  p.description_ = std::move(description);
  return p;
}

const CMatrix& STFTBundle::variant(WindowVariant v) const {
  switch (v) {
    case WindowVariant::g: return V;
    case WindowVariant::g1: return V_g1;
    case WindowVariant::g2: return V_g2;
    case WindowVariant::g3: return V_g3;
    case WindowVariant::gp: return V_gp;
    case WindowVariant::g4: return V_g4;
    case WindowVariant::gpp: return V_gpp;
  }
  return V;
}

namespace {

double radius_for(const WindowFamily& w, double r) { return r > 0.0 ? r : w.truncation_radius(); }

CMatrix& slot(STFTBundle& b, WindowVariant v) {
  switch (v) {
    case WindowVariant::g: return b.V;
    case WindowVariant::g1: return b.V_g1;
    case WindowVariant::g2: return b.V_g2;
    case WindowVariant::g3: return b.V_g3;
    case WindowVariant::gp: return b.V_gp;
    case WindowVariant::g4: return b.V_g4;
    case WindowVariant::gpp: return b.V_gpp;
  }
  return b.V;
}

// exp(i 2 pi c) with c in cycles reduced mod 1 first.
cplx turn(double c) { return std::polar(1.0, kTwoPi * (c - std::floor(c))); }

}  // namespace

STFTBundle compute_bundle(const SampledSignal& x, const SigmaProfile& sigma,
                          const WindowFamily& window, const TFGrid& grid,
                          const StftOptions& opt) {
  x.validate();
  grid.validate();
  const double fs = x.sample_rate;
  const double R = radius_for(window, opt.truncation_radius);
  const std::size_t T = grid.n_times();
  const std::size_t F = grid.n_freqs();
  if (T > 1 && grid.dt() < 1.0 / fs * (1.0 - 1e-9))
    throw InvalidArgument("grid time step must not be smaller than the sample step");

  STFTBundle b;
  b.grid = grid;
  b.sigma = sigma;
  b.window = window;
  b.source_real = x.is_real();
  b.edge.assign(T, 0);
  b.sigma_t.resize(T);
  b.sigma_rate_t.resize(T);
  for (auto* m : {&b.V, &b.V_g1, &b.V_g2, &b.V_g3, &b.V_gp, &b.V_g4, &b.V_gpp, &b.dV_dt,
                  &b.dV_deta})
    *m = CMatrix(T, F);

  // Frame centres on the sample lattice and per-frame half lengths.
  std::vector<std::int64_t> centre(T);
  std::vector<std::int64_t> half(T);
  std::int64_t hmax = 0;
  for (std::size_t i = 0; i < T; ++i) {
    const double pos = (grid.times[i] - x.t0) * fs;
    const double rpos = std::round(pos);
    if (std::abs(pos - rpos) > 1e-9 * std::max(1.0, std::abs(pos)))
      throw InvalidArgument("frame times must lie on the signal's sample lattice");
    centre[i] = static_cast<std::int64_t>(rpos);
    const double s = sigma(grid.times[i]);
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("sigma(t) must be positive");
    b.sigma_t[i] = s;
    b.sigma_rate_t[i] = sigma.derivative(grid.times[i]) / s;
    half[i] = static_cast<std::int64_t>(std::floor(R * s * fs * (1.0 + 1e-12)));
    hmax = std::max(hmax, half[i]);
  }

  const std::size_t N = static_cast<std::size_t>(2 * hmax + 1);
  const double f0 = grid.freqs.front();
  const double deta = F > 1 ? grid.deta() : 1.0;
  detail::ChirpZ cz(N, F, deta / fs);

  // a_n picks up exp(-i 2 pi f0 n / fs); X_m picks up exp(i 2 pi eta_m hmax / fs).
  std::vector<cplx> pre(N), post(F);
  for (std::size_t n = 0; n < N; ++n) pre[n] = turn(-f0 * static_cast<double>(n) / fs);
  for (std::size_t m = 0; m < F; ++m) post[m] = turn(grid.freqs[m] * static_cast<double>(hmax) / fs);

  const auto nx = static_cast<std::int64_t>(x.size());
  std::vector<cplx> seg(N), a(N), out(F);
  for (std::size_t i = 0; i < T; ++i) {
    const double s = b.sigma_t[i];
    const std::int64_t h = half[i];
    if (centre[i] - h < 0 || centre[i] + h >= nx) b.edge[i] = 1;
    std::fill(seg.begin(), seg.end(), cplx{});
    for (std::int64_t d = -h; d <= h; ++d) {
      const std::int64_t idx = centre[i] + d;
      if (idx >= 0 && idx < nx) seg[static_cast<std::size_t>(d + hmax)] = x.samples[static_cast<std::size_t>(idx)];
    }
    for (WindowVariant v : kAllVariants) {
      for (std::size_t n = 0; n < N; ++n) {
        const std::int64_t d = static_cast<std::int64_t>(n) - hmax;
        if (d < -h || d > h || seg[n] == cplx{}) {
          a[n] = cplx{};
          continue;
        }
        const double tau = static_cast<double>(d) / fs;
        a[n] = seg[n] * (window.variant(v, tau / s) / (s * fs)) * pre[n];
      }
      cz(a.data(), out.data());
      cplx* row = slot(b, v).row(i);
      for (std::size_t m = 0; m < F; ++m) row[m] = out[m] * post[m];
    }
    const double r = b.sigma_rate_t[i];
    for (std::size_t m = 0; m < F; ++m) {
      const cplx v = b.V(i, m);
      b.dV_dt(i, m) = (kI2Pi * grid.freqs[m] - r) * v - r * b.V_g3(i, m) - b.V_gp(i, m) / s;
      b.dV_deta(i, m) = -kI2Pi * s * b.V_g1(i, m);
    }
  }
  return b;
}

cplx direct_stft_value(const SampledSignal& x, const SigmaProfile& sigma,
                       const WindowFamily& window, double t, double eta, WindowVariant variant,
                       double radius) {
  const double R = radius_for(window, radius);
  const double s = sigma(t);
  const double fs = x.sample_rate;
  const double lo = (t - R * s * (1.0 + 1e-12) - x.t0) * fs;
  const double hi = (t + R * s * (1.0 + 1e-12) - x.t0) * fs;
  const auto n0 = static_cast<std::int64_t>(std::max(0.0, std::ceil(lo - 1e-9)));
  const auto n1 = static_cast<std::int64_t>(std::min(static_cast<double>(x.size()) - 1.0, std::floor(hi + 1e-9)));
  cplx acc{};
  for (std::int64_t n = n0; n <= n1; ++n) {
    const double tau = (x.t0 - t) + static_cast<double>(n) / fs;
    if (std::abs(tau) > R * s * (1.0 + 1e-12)) continue;
    const double w = window.variant(variant, tau / s) / s;
    acc += x.samples[static_cast<std::size_t>(n)] * w * turn(-eta * tau);
  }
  return acc / fs;
}

CMatrix direct_stft_oracle(const SampledSignal& x, const SigmaProfile& sigma,
                           const WindowFamily& window, const TFGrid& grid, WindowVariant variant,
                           double radius) {
  CMatrix out(grid.n_times(), grid.n_freqs());
  for (std::size_t i = 0; i < grid.n_times(); ++i)
    for (std::size_t j = 0; j < grid.n_freqs(); ++j)
      out(i, j) = direct_stft_value(x, sigma, window, grid.times[i], grid.freqs[j], variant, radius);
  return out;
}

namespace {

SampledSignal frames_signal(const STFTBundle& b) {
  SampledSignal out;
  out.t0 = b.grid.times.front();
  out.sample_rate = b.grid.n_times() > 1 ? 1.0 / b.grid.dt() : 1.0;
  out.samples.resize(b.grid.n_times());
  return out;
}

}  // namespace

SampledSignal reconstruct(const STFTBundle& b) {
  SampledSignal out = frames_signal(b);
  const double deta = b.grid.n_freqs() > 1 ? b.grid.deta() : 1.0;
  for (std::size_t i = 0; i < b.grid.n_times(); ++i) {
    cplx acc{};
    const cplx* row = b.V.row(i);
    for (std::size_t j = 0; j < b.grid.n_freqs(); ++j) acc += row[j];
    out.samples[i] = acc * (deta * b.sigma_t[i] / b.window.g0());
  }
  return out;
}

SampledSignal reconstruct_real(const STFTBundle& b) {
  if (!b.source_real) throw InvalidArgument("reconstruct_real needs a real-valued input signal");
  SampledSignal out = frames_signal(b);
  const double deta = b.grid.n_freqs() > 1 ? b.grid.deta() : 1.0;
  for (std::size_t i = 0; i < b.grid.n_times(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < b.grid.n_freqs(); ++j) {
      const double eta = b.grid.freqs[j];
      if (eta > 0.0) acc += b.V(i, j);
      else if (eta == 0.0) acc += 0.5 * b.V(i, j);
    }
    out.samples[i] = 2.0 * (acc * (deta * b.sigma_t[i] / b.window.g0())).real();
  }
  return out;
}

CellDerivatives cell_derivatives(const STFTBundle& b, std::size_t i, std::size_t j) {
  const double s = b.sigma_t[i];
  const double r = b.sigma_rate_t[i];
  const cplx ie = kI2Pi * b.grid.freqs[j];
  CellDerivatives d;
  d.dVg1_deta = -kI2Pi * s * b.V_g2(i, j);
  d.dVg3_deta = -kI2Pi * s * b.V_g4(i, j);
  d.dVgp_deta = -kI2Pi * s * b.V_g3(i, j);
  d.d2V_deta_dt = kI2Pi * b.V(i, j) + (ie - r) * b.dV_deta(i, j) - r * d.dVg3_deta -
                  d.dVgp_deta / s;
  d.d2V_dt2 = ie * b.dV_dt(i, j) - (ie * b.V_gp(i, j) - b.V_gpp(i, j) / s) / s;
  return d;
}

void write_tfr(const std::string& path, const CMatrix& m, const std::vector<double>& times,
               const std::vector<double>& freqs, const std::string& window_id,
               const std::string& sigma_description, TfrPrecision precision) {
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path);
  for (const cplx& v : m.data()) {
    if (precision == TfrPrecision::complex128) {
      const double p[2] = {v.real(), v.imag()};
      bin.write(reinterpret_cast<const char*>(p), sizeof p);
    } else {
      const float p[2] = {static_cast<float>(v.real()), static_cast<float>(v.imag())};
      bin.write(reinterpret_cast<const char*>(p), sizeof p);
    }
  }
  std::ofstream hdr(path + ".hdr");
  if (!hdr) throw std::runtime_error("cannot open " + path + ".hdr");
  hdr << std::setprecision(17);
  hdr << "format adsst-tfr 1\n";
  hdr << "layout row-major little-endian (rows = times)\n";
  hdr << "rows " << m.rows() << "\ncols " << m.cols() << '\n';
  hdr << "precision " << (precision == TfrPrecision::complex128 ? "complex128" : "complex64") << '\n';
  hdr << "window " << window_id << '\n';
  hdr << "sigma " << sigma_description << '\n';
  hdr << "times";
  for (double t : times) hdr << ' ' << t;
  hdr << "\nfreqs";
  for (double f : freqs) hdr << ' ' << f;
  hdr << '\n';
}

TfrFile read_tfr(const std::string& path) {
  std::ifstream hdr(path + ".hdr");
  if (!hdr) throw std::runtime_error("cannot open " + path + ".hdr");
  TfrFile f;
  std::size_t rows = 0, cols = 0;
  bool dbl = true;
  std::string line;
  while (std::getline(hdr, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "rows") ss >> rows;
    else if (key == "cols") ss >> cols;
    else if (key == "precision") {
      std::string p;
      ss >> p;
      dbl = p == "complex128";
    } else if (key == "window") std::getline(ss >> std::ws, f.window_id);
    else if (key == "sigma") std::getline(ss >> std::ws, f.sigma_description);
    else if (key == "times" || key == "freqs") {
      auto& axis = key == "times" ? f.times : f.freqs;
      double v;
      while (ss >> v) axis.push_back(v);
    }
  }
  if (f.times.size() != rows || f.freqs.size() != cols)
    throw std::runtime_error("TFR header axes do not match its dimensions: " + path);
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path);
  f.values = CMatrix(rows, cols);
  for (cplx& v : f.values.data()) {
    if (dbl) {
      double p[2];
      bin.read(reinterpret_cast<char*>(p), sizeof p);
      v = {p[0], p[1]};
    } else {
      float p[2];
      bin.read(reinterpret_cast<char*>(p), sizeof p);
      v = {p[0], p[1]};
    }
  }
  if (!bin) throw std::runtime_error("TFR payload is truncated: " + path);
  return f;
}

void write_tfr_csv(std::ostream& out, const CMatrix& m, const std::vector<double>& times,
                   const std::vector<double>& freqs) {
  out << "t,eta,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << times[i] << ',' << freqs[j] << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
}

}  // namespace adsst
