// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adsst/bounds.hpp"

namespace adsst {

// Named signal models: tone, two-tone, chirp, two-chirp, am-fm-two-tone.
// The verification scenario names also resolve to their model.
std::vector<std::string> model_preset_names();
MulticomponentModel preset_model(const std::string& name);

// A complete verification setup: model, sampling, grid, window width and
// thresholds for one theorem.
struct Scenario {
  std::string name;
  MulticomponentModel model;
  double fs = 1000.0;
  std::size_t samples = 2000;
  TFGrid grid;
  SigmaProfile sigma = SigmaProfile::constant(0.03);
  WindowFamily window = gaussian_family();
  int order = 1;
  double tau0 = 0.01;
  double eps1_tilde = 0.1;
  double eps2_tilde = 0.1;
  BoundOptions bounds;
};

// two-tone-first-order: slowly modulated tones at 20 and 60 Hz, sigma_1.
// two-chirp-second-order: parallel chirps 10 + 20t and 40 + 20t, sigma_2.
// crossing-negative-control: the same chirps with sigma_1 / 4, whose zones overlap.
std::vector<std::string> scenario_names();
Scenario make_scenario(const std::string& name);

struct ScenarioRun {
  STFTBundle bundle;
  PhaseField phase;
  SqueezedTFR squeezed;
  BoundReport report;
  Comparison comparison;
  Lemma1Report lemma1;
  std::optional<Lemma3Report> lemma3;  // second order only
  bool lemma1_checked = false;
};
ScenarioRun run_scenario(const Scenario& s);

}  // namespace adsst
