// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "adsst/signal_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace adsst {

ComponentProfile::ComponentProfile(std::string kind, Evaluators ev,
                                   std::vector<std::pair<std::string, double>> params,
                                   Interval domain, bool numeric_derivatives)
    : kind_(std::move(kind)),
      ev_(std::move(ev)),
      params_(std::move(params)),
      domain_(domain),
      numeric_(numeric_derivatives) {}

cplx ComponentProfile::value(double t) const {
  double ph = phase(t);
  ph -= std::floor(ph);
  return std::polar(amplitude(t), kTwoPi * ph);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComponentProfile::Fn constant(double v) {
  return [v](double) { return v; };
}

}  // namespace

ComponentProfile make_sinusoid(double A, double c) {
  if (!(A > 0.0)) throw InvalidArgument("sinusoid amplitude must be positive");
  if (!(c > 0.0)) throw InvalidArgument("sinusoid frequency must be positive");
  ComponentProfile::Evaluators ev{constant(A), constant(0.0), constant(0.0),
                                  [c](double t) { return c * t; }, constant(c),
                                  constant(0.0), constant(0.0)};
  return ComponentProfile("tone", std::move(ev), {{"A", A}, {"c", c}}, Interval{-kInf, kInf});
}

ComponentProfile make_linear_chirp(double A, double c, double r, Interval interval) {
  if (!(A > 0.0)) throw InvalidArgument("chirp amplitude must be positive");
  // IF is affine, so checking the endpoints covers the interval.
  if (!(c + r * interval.begin > 0.0) || !(c + r * interval.end > 0.0))
    throw InvalidArgument("chirp instantaneous frequency c + r t is not positive on the interval");
  ComponentProfile::Evaluators ev{constant(A),
                                  constant(0.0),
                                  constant(0.0),
                                  [c, r](double t) { return c * t + 0.5 * r * t * t; },
                                  [c, r](double t) { return c + r * t; },
                                  constant(r),
                                  constant(0.0)};
  return ComponentProfile("chirp", std::move(ev), {{"A", A}, {"c", c}, {"r", r}}, interval);
}

ComponentProfile make_am_fm(double A0, double am_depth, double am_freq, double c, double fm_dev,
                            double fm_freq) {
  if (!(A0 > 0.0) || !(std::abs(am_depth) < 1.0))
    throw InvalidArgument("am_fm amplitude must stay positive (A0 > 0, |am_depth| < 1)");
  if (!(c - std::abs(fm_dev) > 0.0))
    throw InvalidArgument("am_fm instantaneous frequency must stay positive (c > |fm_dev|)");
  if (am_freq < 0.0 || fm_freq < 0.0) throw InvalidArgument("am_fm rates must be nonnegative");
  const double wa = kTwoPi * am_freq;
  const double wf = kTwoPi * fm_freq;
  ComponentProfile::Evaluators ev;
  ev.amplitude = [=](double t) { return A0 * (1.0 + am_depth * std::sin(wa * t)); };
  ev.amplitude_d1 = [=](double t) { return A0 * am_depth * wa * std::cos(wa * t); };
  ev.amplitude_d2 = [=](double t) { return -A0 * am_depth * wa * wa * std::sin(wa * t); };
  ev.phase = [=](double t) {
    if (wf == 0.0) return c * t;
    return c * t + fm_dev * (1.0 - std::cos(wf * t)) / wf;
  };
  ev.freq = [=](double t) { return c + fm_dev * std::sin(wf * t); };
  ev.chirp_rate = [=](double t) { return fm_dev * wf * std::cos(wf * t); };
  ev.chirp_accel = [=](double t) { return -fm_dev * wf * wf * std::sin(wf * t); };
  return ComponentProfile("am_fm", std::move(ev),
                          {{"A", A0},
                           {"am_depth", am_depth},
                           {"am_freq", am_freq},
                           {"c", c},
                           {"fm_dev", fm_dev},
                           {"fm_freq", fm_freq}},
                          Interval{-kInf, kInf});
}

ComponentProfile make_custom(ComponentProfile::Fn amplitude, ComponentProfile::Fn phase,
                             Interval interval) {
  if (!(interval.length() > 0.0) || !std::isfinite(interval.length()))
    throw InvalidArgument("custom profile needs a finite, nonempty interval");
  // First derivatives use step L/1e6. Each further order widens the step by
  // 10x, since nested differences of a phase of many cycles lose digits fast.
  const double h1 = interval.length() * 1e-6;
  const double h2 = h1 * 10.0;
  const double h3 = h1 * 100.0;
  auto d1 = [](const ComponentProfile::Fn& f, double h) {
    return [f, h](double t) { return (f(t + h) - f(t - h)) / (2.0 * h); };
  };
  ComponentProfile::Evaluators ev;
  ev.amplitude = amplitude;
  ev.amplitude_d1 = d1(amplitude, h1);
  ev.amplitude_d2 = d1(ev.amplitude_d1, h2);
  ev.phase = phase;
  ev.freq = d1(phase, h1);
  ev.chirp_rate = d1(ev.freq, h2);
  ev.chirp_accel = d1(ev.chirp_rate, h3);
  return ComponentProfile("custom", std::move(ev), {}, interval, true);
}

cplx MulticomponentModel::value(double t) const {
  cplx s{0.0, 0.0};
  for (const auto& c : components) s += c.value(t);
  return s;
}

bool SampledSignal::is_real(double tol) const {
  return std::all_of(samples.begin(), samples.end(),
                     [tol](const cplx& v) { return std::abs(v.imag()) <= tol; });
}

void SampledSignal::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw InvalidArgument("sample rate must be positive");
  if (!std::isfinite(t0)) throw InvalidArgument("time origin must be finite");
  for (const auto& v : samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("signal contains non-finite samples");
}

TFGrid TFGrid::uniform(double t_begin, double t_step, std::size_t n_times, double f_begin,
                       double f_step, std::size_t n_freqs) {
  TFGrid g;
  g.times.resize(n_times);
  g.freqs.resize(n_freqs);
  for (std::size_t i = 0; i < n_times; ++i) g.times[i] = t_begin + static_cast<double>(i) * t_step;
  for (std::size_t j = 0; j < n_freqs; ++j) g.freqs[j] = f_begin + static_cast<double>(j) * f_step;
  g.validate();
  return g;
}

double TFGrid::dt() const {
  if (times.size() < 2) return 0.0;
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

double TFGrid::deta() const {
  if (freqs.size() < 2) return 0.0;
  return (freqs.back() - freqs.front()) / static_cast<double>(freqs.size() - 1);
}

namespace {

void check_uniform(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw InvalidArgument(std::string(name) + " axis is empty");
  for (double v : axis)
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " axis has non-finite entries");
  if (axis.size() < 2) return;
  const double step = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  if (!(step > 0.0)) throw InvalidArgument(std::string(name) + " axis must be strictly increasing");
  const double scale = std::max(std::abs(axis.front()), std::abs(axis.back())) + step;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    const double d = axis[i] - axis[i - 1];
    if (!(d > 0.0)) throw InvalidArgument(std::string(name) + " axis must be strictly increasing");
    if (std::abs(d - step) > 1e-9 * scale)
      throw InvalidArgument(std::string(name) + " axis must be uniform");
  }
}

}  // namespace

void TFGrid::validate() const {
  check_uniform(times, "time");
  check_uniform(freqs, "frequency");
}

SampledSignal sample(const MulticomponentModel& model, double sample_rate, double t0,
                     std::size_t n) {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  SampledSignal x;
  x.sample_rate = sample_rate;
  x.t0 = t0;
  x.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x.time(i);
    for (const auto& c : model.components)
      if (!c.domain().contains(t)) throw InvalidArgument("sample time outside component domain");
    x.samples[i] = model.value(t);
  }
  return x;
}

SampledSignal sample(const MulticomponentModel& model, const TFGrid& grid) {
  grid.validate();
  if (grid.times.size() < 2) throw InvalidArgument("sampling grid needs at least two times");
  SampledSignal x = sample(model, 1.0 / grid.dt(), grid.times.front(), grid.times.size());
  // Use the grid's own times rather than the reconstructed lattice.
  for (std::size_t i = 0; i < grid.times.size(); ++i) x.samples[i] = model.value(grid.times[i]);
  return x;
}

ClassReport class_check(const MulticomponentModel& model, const std::vector<double>& times,
                        ClassOrder which) {
  ClassReport rep;
  rep.min_if_gap = kInf;
  rep.min_if = kInf;
  const double rate_budget = which == ClassOrder::first_order ? model.eps2 : model.eps3;
  const char* rate_name = which == ClassOrder::first_order ? "|phi''|" : "|phi'''|";
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& c = model.components[k];
    rep.numeric_derivatives = rep.numeric_derivatives || c.numeric_derivatives();
    for (double t : times) {
      const double a1 = std::abs(c.amplitude_d1(t));
      const double p2 = std::abs(c.chirp_rate(t));
      const double p3 = std::abs(c.chirp_accel(t));
      const double f = c.freq(t);
      rep.max_amp_rate = std::max(rep.max_amp_rate, a1);
      rep.max_chirp_rate = std::max(rep.max_chirp_rate, p2);
      rep.max_chirp_accel = std::max(rep.max_chirp_accel, p3);
      rep.min_if = std::min(rep.min_if, f);
      if (a1 > model.eps1) rep.violations.push_back({k, t, "|A'|", a1, model.eps1});
      const double rate = which == ClassOrder::first_order ? p2 : p3;
      if (rate > rate_budget) rep.violations.push_back({k, t, rate_name, rate, rate_budget});
      if (!(f > 0.0)) rep.violations.push_back({k, t, "phi'", f, 0.0});
      if (!(c.amplitude(t) > 0.0)) rep.violations.push_back({k, t, "A", c.amplitude(t), 0.0});
      if (k > 0) {
        const double gap = f - model.components[k - 1].freq(t);
        rep.min_if_gap = std::min(rep.min_if_gap, gap);
        if (!(gap > 0.0)) rep.violations.push_back({k, t, "d'", gap, 0.0});
      }
    }
  }
  rep.passes = rep.violations.empty();
  return rep;
}

void write_signal_csv(std::ostream& out, const SampledSignal& x) {
  out << "t,re,im\n";
  out << std::setprecision(17);
  for (std::size_t n = 0; n < x.size(); ++n)
    out << x.time(n) << ',' << x.samples[n].real() << ',' << x.samples[n].imag() << '\n';
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& v) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [p, ec] = std::from_chars(t.data(), end, v);
  return ec == std::errc{} && p == end;
}

}  // namespace

SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> ts;
  SampledSignal x;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (lineno == 1 && !line.empty() && !std::isdigit(static_cast<unsigned char>(line[0])) &&
        line[0] != '-' && line[0] != '+' && line[0] != '.') {
      if (line.rfind("t,re", 0) != 0) throw ParseError(lineno, "header", "expected header t,re,im");
      continue;
    }
    std::stringstream ss(line);
    std::string f[3];
    double v[3] = {0, 0, 0};
    int nf = 0;
    while (nf < 3 && std::getline(ss, f[nf], ',')) ++nf;
    if (nf < 2) throw ParseError(lineno, "row", "expected t,re[,im]");
    for (int i = 0; i < nf; ++i)
      if (!parse_double(f[i], v[i]))
        throw ParseError(lineno, i == 0 ? "t" : (i == 1 ? "re" : "im"), "not a number: " + f[i]);
    ts.push_back(v[0]);
    x.samples.emplace_back(v[1], v[2]);
  }
  if (ts.size() < 2) throw ParseError(lineno, "rows", "signal needs at least two samples");
  const double step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  if (!(step > 0.0)) throw ParseError(lineno, "t", "time column must increase");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs(ts[i] - ts[i - 1] - step) > 1e-6 * step)
      throw ParseError(i + 2, "t", "time column must be uniformly spaced");
  x.sample_rate = 1.0 / step;
  x.t0 = ts.front();
  x.validate();
  return x;
}

ParseError::ParseError(std::size_t line, std::string key, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", key '" + key + "': " + what),
      line_(line),
      key_(std::move(key)) {}

namespace {

struct PendingComponent {
  std::size_t type_line = 0;
  std::string type;
  std::map<std::string, std::pair<double, std::size_t>> values;
};

double need(const PendingComponent& pc, const std::string& prefix, const std::string& key) {
  auto it = pc.values.find(key);
  if (it == pc.values.end())
    throw ParseError(pc.type_line, prefix + key, "missing required key for type " + pc.type);
  return it->second.first;
}

double optional(const PendingComponent& pc, const std::string& key, double dflt) {
  auto it = pc.values.find(key);
  return it == pc.values.end() ? dflt : it->second.first;
}

}  // namespace

MulticomponentModel parse_model(std::istream& in, Interval interval) {
  MulticomponentModel m;
  std::map<int, PendingComponent> comps;
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
    const std::string val = trim(line.substr(eq + 1));
    if (key == "eps1" || key == "eps2" || key == "eps3") {
      double v;
      if (!parse_double(val, v) || v < 0.0)
        throw ParseError(lineno, key, "expected a nonnegative number, got '" + val + "'");
      (key == "eps1" ? m.eps1 : key == "eps2" ? m.eps2 : m.eps3) = v;
      continue;
    }
    if (key == "interval") {
      std::stringstream ss(val);
      std::string a, b;
      ss >> a >> b;
      double va, vb;
      if (!parse_double(a, va) || !parse_double(b, vb) || !(vb > va))
        throw ParseError(lineno, key, "expected two increasing numbers");
      interval = {va, vb};
      continue;
    }
    if (key.rfind("component.", 0) != 0) throw ParseError(lineno, key, "unknown key");
    const auto dot = key.find('.', 10);
    if (dot == std::string::npos) throw ParseError(lineno, key, "expected component.<n>.<field>");
    int idx = 0;
    const std::string num = key.substr(10, dot - 10);
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), idx);
    if (ec != std::errc{} || p != num.data() + num.size() || idx < 1)
      throw ParseError(lineno, key, "component index must be a positive integer");
    const std::string field = key.substr(dot + 1);
    auto& pc = comps[idx];
    if (field == "type") {
      if (val != "tone" && val != "chirp" && val != "am_fm")
        throw ParseError(lineno, key, "unknown component type '" + val + "'");
      pc.type = val;
      pc.type_line = lineno;
      continue;
    }
    static const char* known[] = {"A", "c", "r", "am_depth", "am_freq", "fm_dev", "fm_freq"};
    if (std::find(std::begin(known), std::end(known), field) == std::end(known))
      throw ParseError(lineno, key, "unknown component field");
    double v;
    if (!parse_double(val, v)) throw ParseError(lineno, key, "not a number: '" + val + "'");
    pc.values[field] = {v, lineno};
  }
  for (auto& [idx, pc] : comps) {
    const std::string prefix = "component." + std::to_string(idx) + ".";
    if (pc.type.empty()) {
      const std::size_t at = pc.values.empty() ? lineno : pc.values.begin()->second.second;
      throw ParseError(at, prefix + "type", "component has no type");
    }
    try {
      if (pc.type == "tone") {
        m.components.push_back(make_sinusoid(need(pc, prefix, "A"), need(pc, prefix, "c")));
      } else if (pc.type == "chirp") {
        m.components.push_back(make_linear_chirp(need(pc, prefix, "A"), need(pc, prefix, "c"),
                                                 need(pc, prefix, "r"), interval));
      } else {
        m.components.push_back(make_am_fm(need(pc, prefix, "A"), optional(pc, "am_depth", 0.0),
                                          optional(pc, "am_freq", 0.0), need(pc, prefix, "c"),
                                          optional(pc, "fm_dev", 0.0),
                                          optional(pc, "fm_freq", 0.0)));
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(pc.type_line, prefix + "type", e.what());
    }
  }
  return m;
}

void write_model(std::ostream& out, const MulticomponentModel& model) {
  out << std::setprecision(17);
  out << "eps1 = " << model.eps1 << "\neps2 = " << model.eps2 << "\neps3 = " << model.eps3 << '\n';
  for (const auto& c : model.components)
    if (std::isfinite(c.domain().begin) && std::isfinite(c.domain().end)) {
      out << "interval = " << c.domain().begin << ' ' << c.domain().end << '\n';
      break;
    }
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& c = model.components[k];
    const std::string prefix = "component." + std::to_string(k + 1) + ".";
    out << prefix << "type = " << c.kind() << '\n';
    for (const auto& [name, v] : c.params()) out << prefix << name << " = " << v << '\n';
  }
}

}  // namespace adsst
