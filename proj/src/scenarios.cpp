// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/scenarios.hpp"

namespace adsst {

namespace {

MulticomponentModel chirp_pair() {
  MulticomponentModel m;
  m.components.push_back(make_linear_chirp(1.0, 10.0, 20.0, {0.0, 2.0}));
  m.components.push_back(make_linear_chirp(1.0, 40.0, 20.0, {0.0, 2.0}));
  return m;
}

// A = 1 + 0.02 sin(pi t), phi' = c + 0.5 sin(pi t / 2); the class constants
// are the exact maxima of |A'|, |phi''| and |phi'''|.
MulticomponentModel modulated_tones() {
  MulticomponentModel m;
  m.components.push_back(make_am_fm(1.0, 0.02, 0.5, 20.0, 0.5, 0.25));
  m.components.push_back(make_am_fm(1.0, 0.02, 0.5, 60.0, 0.5, 0.25));
  m.eps1 = 0.02 * kTwoPi * 0.5;
  m.eps2 = 0.5 * kTwoPi * 0.25;
  m.eps3 = 0.5 * (kTwoPi * 0.25) * (kTwoPi * 0.25);
  return m;
}

}  // namespace

std::vector<std::string> model_preset_names() {
  return {"tone", "two-tone", "chirp", "two-chirp", "am-fm-two-tone"};
}

MulticomponentModel preset_model(const std::string& name) {
  MulticomponentModel m;
  if (name == "tone") {
    m.components.push_back(make_sinusoid(1.0, 50.0));
  } else if (name == "two-tone") {
    m.components.push_back(make_sinusoid(1.0, 20.0));
    m.components.push_back(make_sinusoid(1.0, 60.0));
  } else if (name == "chirp") {
    m.components.push_back(make_linear_chirp(1.0, 10.0, 20.0, {0.0, 2.0}));
  } else if (name == "two-chirp" || name == "two-chirp-second-order" ||
             name == "crossing-negative-control") {
    m = chirp_pair();
  } else if (name == "am-fm-two-tone" || name == "two-tone-first-order") {
    m = modulated_tones();
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  return m;
}

std::vector<std::string> scenario_names() {
  return {"two-tone-first-order", "two-chirp-second-order", "crossing-negative-control"};
}

Scenario make_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.grid = TFGrid::uniform(0.2, 0.01, 161, 0.0, 0.5, 241);
  const double alpha = effective_support(s.window, s.tau0);
  if (name == "two-tone-first-order") {
    s.model = modulated_tones();
    s.sigma = sigma1(s.model, alpha);
    s.order = 1;
    s.eps1_tilde = 0.1;
  } else if (name == "two-chirp-second-order") {
    s.model = chirp_pair();
    s.sigma = sigma2(s.model, alpha, s.grid.times);
    s.order = 2;
    s.eps1_tilde = 0.05;
    s.eps2_tilde = 0.1;
  } else if (name == "crossing-negative-control") {
    s.model = chirp_pair();
    // The chirps are parallel, so sigma_1 is constant.
    s.sigma = SigmaProfile::constant(sigma1(s.model, alpha)(1.0) / 4.0);
    s.order = 2;
    s.eps1_tilde = 0.05;
    s.eps2_tilde = 0.1;
  } else {
    throw InvalidArgument("unknown scenario '" + name + "'");
  }
  return s;
}

ScenarioRun run_scenario(const Scenario& s) {
  if (s.order != 1 && s.order != 2) throw InvalidArgument("order must be 1 or 2");
  ScenarioRun r;
  r.bundle = compute_bundle(sample(s.model, s.fs, 0.0, s.samples), s.sigma, s.window, s.grid);
  const auto& b = r.bundle;
  r.report.times = b.grid.times;
  r.report.sigma = b.sigma_t;
  r.report.remainder = first_order_remainder_bounds(s.model, s.sigma, s.window, b.grid.times);
  r.report.gamma = gamma_bounds(s.model, s.window, b.grid.times);
  r.report.residual = second_order_residual_bounds(s.model, s.sigma, s.window, b.grid.times);
  if (s.order == 1) {
    r.phase = omega_adaptive(b, s.eps1_tilde);
    r.squeezed = squeeze(b, r.phase);
    r.report.first = theorem1_bounds(s.model, s.sigma, s.window, s.tau0, s.eps1_tilde,
                                     b.grid.times, s.bounds);
    r.comparison = empirical_vs_bound(s.model, b, r.phase, r.squeezed, *r.report.first);
  } else {
    r.phase = omega_adaptive_second(b, s.eps1_tilde, s.eps2_tilde);
    r.squeezed = squeeze(b, r.phase);
    r.report.second = theorem2_bounds(s.model, b, s.tau0, s.eps1_tilde, s.eps2_tilde, s.bounds);
    r.comparison = empirical_vs_bound(s.model, b, r.phase, r.squeezed, *r.report.second);
    r.lemma3 = verify_lemma3(b, s.model, s.tau0, s.eps1_tilde, s.eps2_tilde);
  }
  // The Err1 envelope is built from the chirp expansion, which needs eps3.
  r.lemma1_checked = s.order == 2 || s.model.eps3 > 0.0;
  if (r.lemma1_checked) r.lemma1 = verify_lemma1(b, s.model, s.tau0);
  return r;
}

}  // namespace adsst
