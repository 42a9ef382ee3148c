// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "adsst/adaptive_stft.hpp"
#include "oracles.hpp"

using namespace adsst;
using oracle::pi;

namespace {

double frob_rel(const CMatrix& a, const CMatrix& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.data()[i] - b.data()[i]);
    den += std::norm(b.data()[i]);
  }
  return std::sqrt(num / den);
}

MulticomponentModel tone_model(double A, double c) {
  MulticomponentModel m;
  m.components.push_back(make_sinusoid(A, c));
  return m;
}

MulticomponentModel chirp_model(double c, double r, Interval I) {
  MulticomponentModel m;
  m.components.push_back(make_linear_chirp(1.0, c, r, I));
  return m;
}

// Relative l2 over interior frames.
double interior_error(const STFTBundle& b, const SampledSignal& rec,
                      const std::function<cplx(double)>& truth) {
  std::vector<cplx> got, want;
  for (std::size_t i = 0; i < b.grid.n_times(); ++i) {
    if (!b.interior(i)) continue;
    got.push_back(rec.samples[i]);
    want.push_back(truth(b.grid.times[i]));
  }
  REQUIRE(!got.empty());
  return oracle::rel_l2(got, want);
}

}  // namespace

TEST_SUITE("adaptive_stft") {

TEST_CASE("zero signal gives zero matrices") {
  SampledSignal x;
  x.sample_rate = 100;
  x.samples.assign(400, cplx{});
  auto g = TFGrid::uniform(1.0, 0.1, 10, 0.0, 1.0, 20);
  auto b = compute_bundle(x, SigmaProfile::constant(0.05), gaussian_family(), g);
  for (WindowVariant v : kAllVariants)
    for (auto z : b.variant(v).data()) CHECK(z == cplx{});
  for (auto z : b.dV_dt.data()) CHECK(z == cplx{});
  CHECK(direct_stft_value(x, SigmaProfile::constant(0.05), gaussian_family(), 1.0, 3.0) == cplx{});
}

TEST_CASE("tone matches the closed form") {
  auto x = sample(tone_model(1.0, 50.0), 1000.0, -10.0, 21001);
  auto g = TFGrid::uniform(0.5, 0.1, 1, 40.0, 0.5, 41);
  auto b = compute_bundle(x, SigmaProfile::constant(1.0), gaussian_family(), g);
  const cplx at50 = b.V(0, 20);
  CHECK(std::abs(at50 - cplx(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(at50) == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t j = 0; j < g.n_freqs(); ++j) {
    const double eta = g.freqs[j];
    const cplx want = std::polar(1.0, 2 * pi * 50 * 0.5) * std::exp(-2 * pi * pi * (eta - 50) * (eta - 50));
    CHECK(std::abs(b.V(0, j) - want) < 1e-9);
  }
  const cplx direct = direct_stft_value(x, SigmaProfile::constant(1.0), gaussian_family(), 0.5, 50.0);
  CHECK(std::abs(direct - cplx(1.0, 0.0)) < 1e-9);
}

TEST_CASE("chirp ridge magnitude matches the closed form") {
  Interval I{0.0, 2.0};
  auto x = sample(chirp_model(10.0, 20.0, I), 1000.0, 0.0, 2001);
  const double s = 0.05;
  const double mu = 2 * pi * 20 * s * s;
  const double want = std::pow(1.0 + mu * mu, -0.25);
  CHECK(want == doctest::Approx(0.976744).epsilon(1e-6));
  for (double t : {0.6, 1.0, 1.4}) {
    auto g = TFGrid::uniform(t, 0.01, 1, 10.0 + 20.0 * t, 1.0, 1);
    auto b = compute_bundle(x, SigmaProfile::constant(s), gaussian_family(), g);
    CHECK(std::abs(b.V(0, 0)) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("fast path equals direct oracle on 64x64 grids") {
  Interval I{0.0, 2.0};
  auto grid = TFGrid::uniform(0.6, 0.01, 64, 0.0, 2.0, 64);
  std::vector<MulticomponentModel> models{tone_model(1.0, 50.0), chirp_model(10.0, 20.0, I)};
  MulticomponentModel two;
  two.components.push_back(make_sinusoid(1.0, 20.0));
  two.components.push_back(make_sinusoid(0.7, 60.0));
  models.push_back(two);
  for (const auto& m : models) {
    auto x = sample(m, 1000.0, 0.0, 2001);
    for (auto sig : {SigmaProfile::constant(0.03), SigmaProfile::linear(0.02, 0.01)}) {
      auto b = compute_bundle(x, sig, gaussian_family(), grid);
      for (WindowVariant v : kAllVariants) {
        auto d = direct_stft_oracle(x, sig, gaussian_family(), grid, v);
        CHECK(frob_rel(b.variant(v), d) <= 1e-9);
      }
    }
  }
  // Non-Gaussian window through the same two paths.
  auto x = sample(two, 1000.0, 0.0, 2001);
  auto w = WindowFamily::hyperbolic_secant();
  auto b = compute_bundle(x, SigmaProfile::constant(0.02), w, grid);
  CHECK(frob_rel(b.V, direct_stft_oracle(x, SigmaProfile::constant(0.02), w, grid)) <= 1e-9);
}

TEST_CASE("linearity and modulation covariance") {
  Interval I{0.0, 2.0};
  auto xa = sample(chirp_model(10.0, 20.0, I), 1000.0, 0.0, 2001);
  auto xb = sample(tone_model(0.5, 70.0), 1000.0, 0.0, 2001);
  const cplx a{0.3, -1.2}, bb{2.0, 0.5};
  SampledSignal xc = xa;
  for (std::size_t n = 0; n < xc.size(); ++n) xc.samples[n] = a * xa.samples[n] + bb * xb.samples[n];
  auto grid = TFGrid::uniform(0.5, 0.05, 21, 0.0, 0.5, 200);
  auto sig = SigmaProfile::linear(0.02, 0.01);
  auto Ba = compute_bundle(xa, sig, gaussian_family(), grid);
  auto Bb = compute_bundle(xb, sig, gaussian_family(), grid);
  auto Bc = compute_bundle(xc, sig, gaussian_family(), grid);
  double worst = 0, scale = 0;
  for (std::size_t k = 0; k < Bc.V.size(); ++k) {
    worst = std::max(worst, std::abs(Bc.V.data()[k] - (a * Ba.V.data()[k] + bb * Bb.V.data()[k])));
    worst = std::max(worst, std::abs(Bc.dV_dt.data()[k] - (a * Ba.dV_dt.data()[k] + bb * Bb.dV_dt.data()[k])) / 1e3);
    scale = std::max(scale, std::abs(Bc.V.data()[k]));
  }
  CHECK(worst <= 1e-13 * scale);

  // x(t) e^{i 2 pi xi0 t} with xi0 = 10 Hz = 20 bins.
  SampledSignal xm = xa;
  for (std::size_t n = 0; n < xm.size(); ++n) xm.samples[n] *= std::polar(1.0, 2 * pi * 10.0 * xm.time(n));
  auto Bm = compute_bundle(xm, SigmaProfile::constant(0.03), gaussian_family(), grid);
  auto B0 = compute_bundle(xa, SigmaProfile::constant(0.03), gaussian_family(), grid);
  double dev = 0;
  for (std::size_t i = 0; i < grid.n_times(); ++i)
    for (std::size_t j = 20; j < grid.n_freqs(); ++j) {
      const cplx want = std::polar(1.0, 2 * pi * 10.0 * grid.times[i]) * B0.V(i, j - 20);
      dev = std::max(dev, std::abs(Bm.V(i, j) - want));
    }
  CHECK(dev <= 1e-10);
}

TEST_CASE("derivative identities converge against finite differences") {
  Interval I{0.0, 2.0};
  MulticomponentModel m = chirp_model(10.0, 20.0, I);
  m.components.push_back(make_am_fm(0.8, 0.1, 1.0, 55.0, 4.0, 0.5));
  auto x = sample(m, 1000.0, 0.0, 2001);
  auto sig = SigmaProfile::linear(0.02, 0.01);
  auto w = gaussian_family();
  auto grid = TFGrid::uniform(0.8, 0.001, 3, 15.0, 6.0, 8);
  auto b = compute_bundle(x, sig, w, grid);
  for (std::size_t i = 0; i < grid.n_times(); ++i)
    for (std::size_t j = 0; j < grid.n_freqs(); ++j) {
      const double t = grid.times[i], eta = grid.freqs[j];
      auto Vt = [&](double s) { return direct_stft_value(x, sig, w, s, eta); };
      auto Ve = [&](double e) { return direct_stft_value(x, sig, w, t, e); };
      const double h = grid.dt();
      const double et1 = std::abs(oracle::richardson(Vt, t, h) - b.dV_dt(i, j));
      const double et2 = std::abs(oracle::richardson(Vt, t, h / 2) - b.dV_dt(i, j));
      CHECK(et2 <= 1e-4 * std::abs(b.dV_dt(i, j)) + 1e-9);
      if (et2 > 1e-12) CHECK(std::log2(et1 / et2) >= 2.0);
      const double he = 0.5;
      const double ee1 = std::abs(oracle::richardson(Ve, eta, he) - b.dV_deta(i, j));
      const double ee2 = std::abs(oracle::richardson(Ve, eta, he / 2) - b.dV_deta(i, j));
      CHECK(ee2 <= 1e-6 * std::abs(b.dV_deta(i, j)) + 1e-9);
      if (ee2 > 1e-12) CHECK(std::log2(ee1 / ee2) >= 2.0);
    }
}

TEST_CASE("mixed and second derivatives agree with finite differences") {
  Interval I{0.0, 2.0};
  auto x = sample(chirp_model(10.0, 20.0, I), 1000.0, 0.0, 2001);
  auto w = gaussian_family();
  auto sig = SigmaProfile::constant(0.04);
  auto grid = TFGrid::uniform(1.0, 0.01, 1, 25.0, 2.0, 6);
  auto b = compute_bundle(x, sig, w, grid);
  auto lin = SigmaProfile::linear(0.02, 0.01);
  auto bl = compute_bundle(x, lin, w, grid);
  for (std::size_t j = 0; j < grid.n_freqs(); ++j) {
    const double eta = grid.freqs[j];
    auto d = cell_derivatives(b, 0, j);
    // d_t of dV_dt along t equals d2V_dt2 (constant sigma)
    auto dVdt = [&](double t) {
      const cplx v = direct_stft_value(x, sig, w, t, eta);
      const cplx vgp = direct_stft_value(x, sig, w, t, eta, WindowVariant::gp);
      return cplx(0, 2 * pi * eta) * v - vgp / 0.04;
    };
    const double fd1 = std::abs(oracle::richardson(dVdt, 1.0, 1e-3) - d.d2V_dt2);
    const double fd2 = std::abs(oracle::richardson(dVdt, 1.0, 5e-4) - d.d2V_dt2);
    CHECK(fd2 <= 1e-4 * std::abs(d.d2V_dt2));
    if (fd2 > 1e-12 * std::abs(d.d2V_dt2)) CHECK(std::log2(fd1 / fd2) >= 2.0);
    // d_eta of dV_dt under time-varying sigma
    auto dl = cell_derivatives(bl, 0, j);
    auto dVdt_l = [&](double e) {
      const double s = lin(1.0), r = 0.01 / s;
      const cplx v = direct_stft_value(x, lin, w, 1.0, e);
      const cplx vg3 = direct_stft_value(x, lin, w, 1.0, e, WindowVariant::g3);
      const cplx vgp = direct_stft_value(x, lin, w, 1.0, e, WindowVariant::gp);
      return (cplx(0, 2 * pi * e) - r) * v - r * vg3 - vgp / s;
    };
    const double fe1 = std::abs(oracle::richardson(dVdt_l, eta, 0.5) - dl.d2V_deta_dt);
    const double fe2 = std::abs(oracle::richardson(dVdt_l, eta, 0.25) - dl.d2V_deta_dt);
    CHECK(fe2 <= 1e-6 * std::abs(dl.d2V_deta_dt));
    if (fe2 > 1e-12 * std::abs(dl.d2V_deta_dt)) CHECK(std::log2(fe1 / fe2) >= 2.0);
  }
}

TEST_CASE("inversion") {
  auto w = gaussian_family();
  auto grid = TFGrid::uniform(0.0, 0.1, 251, 0.0, 0.25, 801);
  {
    auto m = tone_model(1.0, 50.0);
    auto x = sample(m, 1000.0, 0.0, 25001);
    auto b = compute_bundle(x, SigmaProfile::constant(1.0), w, grid);
    CHECK(interior_error(b, reconstruct(b), [&](double t) { return m.value(t); }) <= 1e-3);
  }
  {
    MulticomponentModel m;
    m.components.push_back(make_sinusoid(1.0, 20.0));
    m.components.push_back(make_sinusoid(1.0, 60.0));
    auto x = sample(m, 1000.0, 0.0, 25001);
    auto b = compute_bundle(x, SigmaProfile::constant(1.0), w, grid);
    CHECK(interior_error(b, reconstruct(b), [&](double t) { return m.value(t); }) <= 1e-3);
  }
  {
    SampledSignal x;
    x.sample_rate = 1000.0;
    for (int n = 0; n <= 25000; ++n) x.samples.emplace_back(std::cos(2 * pi * 50.0 * n / 1000.0), 0.0);
    auto b = compute_bundle(x, SigmaProfile::constant(1.0), w, grid);
    auto r = reconstruct_real(b);
    CHECK(interior_error(b, r, [](double t) { return cplx(std::cos(2 * pi * 50 * t), 0); }) <= 1e-3);
  }
  {
    Interval I{0.0, 2.0};
    auto g2 = TFGrid::uniform(0.0, 0.01, 201, 0.0, 0.25, 801);
    auto m = chirp_model(10.0, 20.0, I);
    auto x = sample(m, 1000.0, 0.0, 2001);
    auto b = compute_bundle(x, SigmaProfile::constant(0.05), w, g2);
    CHECK(interior_error(b, reconstruct(b), [&](double t) { return m.value(t); }) <= 5e-3);
    SampledSignal xr = x;
    for (auto& v : xr.samples) v = cplx(v.real(), 0.0);
    auto br = compute_bundle(xr, SigmaProfile::constant(0.05), w, g2);
    CHECK(interior_error(br, reconstruct_real(br), [&](double t) { return cplx(m.value(t).real(), 0); }) <= 5e-3);
    CHECK_THROWS_AS(reconstruct_real(b), InvalidArgument);
  }
  {
    SampledSignal z;
    z.sample_rate = 1000.0;
    z.samples.assign(2001, cplx{});
    auto b = compute_bundle(z, SigmaProfile::constant(0.05), w, TFGrid::uniform(0.0, 0.01, 201, 0.0, 1.0, 100));
    for (auto v : reconstruct(b).samples) CHECK(v == cplx{});
    for (auto v : reconstruct_real(b).samples) CHECK(v == cplx{});
  }
}

TEST_CASE("edge mask and lattice checks") {
  auto x = sample(tone_model(1.0, 5.0), 100.0, 0.0, 201);
  auto grid = TFGrid::uniform(0.0, 0.1, 21, 0.0, 1.0, 10);
  auto b = compute_bundle(x, SigmaProfile::constant(0.05), gaussian_family(), grid);
  CHECK(b.edge.front() == 1);
  CHECK(b.edge[10] == 0);
  CHECK(b.edge.back() == 1);
  auto off = TFGrid::uniform(0.0005, 0.1, 3, 0.0, 1.0, 10);
  CHECK_THROWS_AS(compute_bundle(x, SigmaProfile::constant(0.05), gaussian_family(), off), InvalidArgument);
}

TEST_CASE("tfr files round trip") {
  auto x = sample(tone_model(1.0, 5.0), 100.0, 0.0, 201);
  auto grid = TFGrid::uniform(0.5, 0.1, 5, 0.0, 1.0, 10);
  auto b = compute_bundle(x, SigmaProfile::constant(0.05), gaussian_family(), grid);
  const auto path = (std::filesystem::temp_directory_path() / "adsst_tfr_test.bin").string();
  write_tfr(path, b.V, grid.times, grid.freqs, "gaussian", b.sigma.description());
  auto f = read_tfr(path);
  CHECK(f.values.rows() == 5);
  CHECK(f.window_id == "gaussian");
  for (std::size_t k = 0; k < b.V.size(); ++k) CHECK(f.values.data()[k] == b.V.data()[k]);
  write_tfr(path, b.V, grid.times, grid.freqs, "gaussian", "x", TfrPrecision::complex64);
  auto g = read_tfr(path);
  CHECK(std::abs(g.values(2, 5) - b.V(2, 5)) < 1e-6);
  std::stringstream csv;
  write_tfr_csv(csv, b.V, grid.times, grid.freqs);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,eta,re,im");
  std::remove(path.c_str());
  std::remove((path + ".hdr").c_str());
}

}
