// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "run_config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "adsst/signal_model.hpp"

namespace adsst::cli {

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      {"input", "", "signal CSV (t,re,im) or model file; empty uses the preset"},
      {"out", "out", "output directory"},
      {"preset", "", "model preset or verification scenario name"},
      {"grid.fs", "1000", "sample rate in Hz when synthesizing"},
      {"grid.duration", "2", "signal length in seconds when synthesizing"},
      {"grid.frame_step", "0.01", "time step between frames in seconds"},
      {"grid.margin", "0.2", "frames start and stop this far inside the record"},
      {"grid.f_min", "0", "lowest analysis frequency in Hz"},
      {"grid.f_max", "120", "highest analysis frequency in Hz"},
      {"grid.deta", "0.5", "frequency step in Hz"},
      {"window", "gaussian", "gaussian or hyperbolic_secant"},
      {"tau0", "0.01", "threshold defining the effective support alpha"},
      {"sigma.mode", "sigma2", "constant, linear, sigma1, sigma2 or file"},
      {"sigma.value", "0.03", "constant width, or intercept for linear"},
      {"sigma.slope", "0", "slope for linear"},
      {"sigma.file", "", "CSV t,sigma for file mode (linear interpolation)"},
      {"sigma.scale", "1", "factor applied to sigma1 or sigma2"},
      {"order", "2", "phase transform order, 1 or 2"},
      {"gamma", "auto", "magnitude threshold; auto is 1e-3 max|V|"},
      {"gamma2", "auto", "second-order threshold; auto is 1e-4 median|d_eta(V_g1/V)|"},
      {"lambda", "0", "squeeze kernel width in Hz; 0 bins directly"},
      {"kernel", "quartic_bump", "quartic_bump or triangle"},
      {"ridges", "auto", "number of ridges; auto uses the model size or 2"},
      {"ridge.penalty", "0.05", "frequency-jump penalty per squared bin"},
      {"recover.halfwidth", "auto", "band halfwidth in Hz; auto is alpha/sigma(t)"},
      {"eps1_tilde", "auto", "bound threshold eps~1; auto ties to gamma"},
      {"eps2_tilde", "auto", "bound threshold eps~2; auto ties to gamma2"},
      {"epsilon_coupling", "fixed", "fixed, or cube-root for eps~ = eps^(1/3)"},
      {"sup_samples", "1024", "sampling density of the bound sups"},
      {"emit_truth", "false", "synth also writes t and phi'_k columns"},
      {"plot.scale", "log", "log or linear"},
      {"plot.db_range", "80", "dynamic range of the log scale in dB"},
      {"plot.png", "false", "also write a PNG next to the PPM"},
  };
  return fields;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool known(const std::string& key) {
  const auto& f = config_fields();
  return std::any_of(f.begin(), f.end(), [&](const ConfigField& c) { return c.key == key; });
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& f : config_fields()) values_[f.key] = f.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw InvalidArgument("unknown config key '" + key + "'");
  values_[key] = value;
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  const std::string& v = get(key);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw InvalidArgument("config key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::optional<double> RunConfig::number_or_auto(const std::string& key) const {
  if (get(key) == "auto") return std::nullopt;
  return number(key);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "' expects true or false, got '" + v + "'");
}

void RunConfig::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, line, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!known(key)) throw ParseError(lineno, key, "unknown config key");
    values_[key] = trim(line.substr(eq + 1));
  }
}

void RunConfig::save(std::ostream& out) const {
  for (const auto& f : config_fields()) out << f.key << " = " << values_.at(f.key) << '\n';
}

std::string RunConfig::hash() const {
  std::ostringstream s;
  save(s);
  const std::string text = s.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace adsst::cli
