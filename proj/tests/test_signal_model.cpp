// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "adsst/signal_model.hpp"
#include "oracles.hpp"

using namespace adsst;

TEST_SUITE("signal_model") {

TEST_CASE("sinusoid evaluators") {
  auto p = make_sinusoid(1.0, 50.0);
  CHECK(p.freq(0.3) == 50.0);
  CHECK(p.chirp_rate(0.3) == 0.0);
  CHECK(p.chirp_accel(0.3) == 0.0);
  CHECK(p.amplitude_d1(0.3) == 0.0);
  auto q = make_sinusoid(2.0, 10.0);
  CHECK(q.value(0.0) == cplx(2.0, 0.0));
  CHECK_THROWS_AS(make_sinusoid(0.0, 10.0), InvalidArgument);
  CHECK_THROWS_AS(make_sinusoid(1.0, -1.0), InvalidArgument);
}

TEST_CASE("sampled tone peaks at its DFT bin") {
  MulticomponentModel m;
  m.components.push_back(make_sinusoid(1.0, 25.0));
  auto x = sample(m, 1000.0, 0.0, 1000);
  // Plain O(N^2) DFT, 1 Hz bins.
  int best = -1;
  double best_mag = -1;
  for (int k = 0; k < 500; ++k) {
    oracle::cplx acc = 0;
    for (int n = 0; n < 1000; ++n)
      acc += x.samples[n] * std::polar(1.0, -2.0 * oracle::pi * k * n / 1000.0);
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best = k;
    }
  }
  CHECK(best == 25);
}

TEST_CASE("linear chirp evaluators") {
  Interval I{0.0, 2.0};
  auto p = make_linear_chirp(1.0, 10.0, 20.0, I);
  CHECK(p.freq(0.5) == doctest::Approx(20.0));
  CHECK(p.phase(1.0) == doctest::Approx(20.0));
  CHECK(p.chirp_rate(0.7) == 20.0);
  CHECK_THROWS_AS(make_linear_chirp(1.0, 10.0, -20.0, I), InvalidArgument);

  MulticomponentModel a, b;
  a.components.push_back(make_linear_chirp(1.0, 10.0, 0.0, I));
  b.components.push_back(make_sinusoid(1.0, 10.0));
  auto xa = sample(a, 1000.0, 0.0, 2000);
  auto xb = sample(b, 1000.0, 0.0, 2000);
  for (std::size_t n = 0; n < xa.size(); ++n) REQUIRE(xa.samples[n] == xb.samples[n]);
}

TEST_CASE("sampling") {
  MulticomponentModel m;
  m.components.push_back(make_sinusoid(1.0, 20.0));
  m.components.push_back(make_sinusoid(1.0, 60.0));
  CHECK(m.value(0.0) == cplx(2.0, 0.0));

  MulticomponentModel empty;
  auto z = sample(empty, 100.0, 0.0, 50);
  for (auto v : z.samples) CHECK(v == cplx{});

  MulticomponentModel tone;
  tone.components.push_back(make_sinusoid(1.0, 50.0));
  auto x = sample(tone, 1000.0, 0.0, 1000);
  double e = 0;
  for (auto v : x.samples) e += std::norm(v);
  CHECK(e / 1000.0 == doctest::Approx(1.0).epsilon(1e-12));

  // Linearity: sampling the union equals the pointwise sum.
  MulticomponentModel m1, m2, both;
  m1.components.push_back(make_am_fm(1.0, 0.1, 0.5, 30.0, 2.0, 0.25));
  m2.components.push_back(make_linear_chirp(0.5, 60.0, 5.0, {0.0, 1.0}));
  both.components = {m1.components[0], m2.components[0]};
  auto s1 = sample(m1, 500.0, 0.0, 500), s2 = sample(m2, 500.0, 0.0, 500),
       s12 = sample(both, 500.0, 0.0, 500);
  for (std::size_t n = 0; n < 500; ++n)
    REQUIRE(std::abs(s12.samples[n] - (s1.samples[n] + s2.samples[n])) <= 1e-15);

  auto g = TFGrid::uniform(0.0, 0.001, 100, 0.0, 1.0, 10);
  auto xg = sample(tone, g);
  CHECK(xg.sample_rate == doctest::Approx(1000.0));
  CHECK(xg.size() == 100);
}

TEST_CASE("class checks") {
  Interval I{0.0, 1.0};
  std::vector<double> ts;
  for (int i = 0; i <= 100; ++i) ts.push_back(0.01 * i);

  MulticomponentModel chirps;
  chirps.components.push_back(make_linear_chirp(1.0, 10.0, 20.0, I));
  chirps.components.push_back(make_linear_chirp(1.0, 40.0, 20.0, I));
  chirps.eps3 = 0.0;
  auto r2 = class_check(chirps, ts, ClassOrder::second_order);
  CHECK(r2.passes);
  CHECK(r2.max_chirp_accel == 0.0);

  MulticomponentModel tones;
  tones.components.push_back(make_sinusoid(1.0, 20.0));
  tones.components.push_back(make_sinusoid(1.0, 60.0));
  CHECK(class_check(tones, ts, ClassOrder::first_order).min_if_gap == 40.0);

  MulticomponentModel one;
  one.components.push_back(make_linear_chirp(1.0, 10.0, 20.0, I));
  one.eps2 = 1.0;
  auto r1 = class_check(one, ts, ClassOrder::first_order);
  CHECK_FALSE(r1.passes);
  CHECK(r1.max_chirp_rate == 20.0);

  // d' equals a brute-force scan of phi'_k - phi'_{k-1}.
  MulticomponentModel fm;
  fm.components.push_back(make_am_fm(1.0, 0.0, 0.0, 20.0, 3.0, 1.0));
  fm.components.push_back(make_am_fm(1.0, 0.0, 0.0, 30.0, 2.0, 1.3));
  double brute = std::numeric_limits<double>::infinity();
  for (double t : ts) brute = std::min(brute, fm.components[1].freq(t) - fm.components[0].freq(t));
  CHECK(class_check(fm, ts, ClassOrder::first_order).min_if_gap == brute);
}

TEST_CASE("am-fm derivatives agree with finite differences") {
  auto p = make_am_fm(1.3, 0.2, 0.7, 40.0, 3.0, 0.9);
  for (double t : {0.1, 0.37, 0.8}) {
    CHECK(p.freq(t) == doctest::Approx(oracle::richardson([&](double s) { return p.phase(s); }, t, 1e-3)).epsilon(1e-9));
    CHECK(p.chirp_rate(t) == doctest::Approx(oracle::richardson([&](double s) { return p.freq(s); }, t, 1e-3)).epsilon(1e-8));
    CHECK(p.chirp_accel(t) == doctest::Approx(oracle::richardson([&](double s) { return p.chirp_rate(s); }, t, 1e-3)).epsilon(1e-8));
    CHECK(p.amplitude_d1(t) == doctest::Approx(oracle::richardson([&](double s) { return p.amplitude(s); }, t, 1e-3)).epsilon(1e-8));
  }
  auto c = make_custom([](double t) { return 1.0 + 0.1 * t; }, [](double t) { return 5.0 * t + t * t; },
                       {0.0, 1.0});
  CHECK(c.numeric_derivatives());
  CHECK(c.freq(0.5) == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(c.chirp_rate(0.5) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("signal csv round trip") {
  MulticomponentModel m;
  m.components.push_back(make_sinusoid(1.0, 7.0));
  auto x = sample(m, 100.0, 0.25, 64);
  std::stringstream ss;
  write_signal_csv(ss, x);
  auto y = read_signal_csv(ss);
  CHECK(y.size() == x.size());
  CHECK(y.sample_rate == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(y.t0 == 0.25);
  for (std::size_t n = 0; n < x.size(); ++n) CHECK(y.samples[n] == x.samples[n]);
}

TEST_CASE("model file parsing") {
  std::stringstream good(
      "# two chirps\neps1 = 0\neps3 = 0\ncomponent.1.type = chirp\ncomponent.1.A = 1\n"
      "component.1.c = 10\ncomponent.1.r = 20\ncomponent.2.type = tone\ncomponent.2.A = 2\n"
      "component.2.c = 80\n");
  auto m = parse_model(good, {0.0, 2.0});
  REQUIRE(m.size() == 2);
  CHECK(m.components[0].freq(1.0) == 30.0);
  CHECK(m.components[1].amplitude(0.0) == 2.0);

  std::stringstream out;
  write_model(out, m);
  auto m2 = parse_model(out, {0.0, 2.0});
  CHECK(m2.components[0].freq(0.4) == m.components[0].freq(0.4));

  std::stringstream bad("component.1.type = tone\ncomponent.1.A = 1\ncomponent.1.frq = 3\n");
  try {
    parse_model(bad, {0.0, 1.0});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.key() == "component.1.frq");
  }
  std::stringstream missing("component.1.type = chirp\ncomponent.1.A = 1\ncomponent.1.c = 3\n");
  CHECK_THROWS_AS(parse_model(missing, {0.0, 1.0}), ParseError);
}

}
