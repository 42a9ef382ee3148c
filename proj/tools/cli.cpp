// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.hpp"

#include <openssl/opensslv.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "adsst/scenarios.hpp"
#include "heatmap.hpp"
#include "run_config.hpp"

namespace adsst::cli {

namespace fs = std::filesystem;

namespace {

// IO and usage problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig cfg;
  std::string command;
  fs::path out_dir;
  std::ostream& out;
  std::vector<std::string> inputs, outputs;

  fs::path output(const std::string& name) {
    const fs::path p = out_dir / name;
    outputs.push_back(p.string());
    return p;
  }
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot write " + p.string());
  f << std::setprecision(17);
  return f;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream f(p);
  if (!f) throw UsageError("cannot read " + p);
  return f;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool input_is_signal(const RunConfig& c) { return ends_with(c.get("input"), ".csv"); }

std::optional<MulticomponentModel> load_model(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::string& input = c.get("input");
  if (!input.empty() && !input_is_signal(c)) {
    auto f = open_in(input);
    ctx.inputs.push_back(input);
    return parse_model(f, {0.0, c.number("grid.duration")});
  }
  if (!c.get("preset").empty()) return preset_model(c.get("preset"));
  return std::nullopt;
}

MulticomponentModel require_model(Context& ctx, const std::optional<MulticomponentModel>& m) {
  if (!m) throw UsageError(ctx.command + " needs a signal model: pass --preset or a model file as --input");
  return *m;
}

std::size_t sample_count(const RunConfig& c) {
  const double n = std::round(c.number("grid.fs") * c.number("grid.duration"));
  if (!(n >= 1.0)) throw UsageError("grid.fs * grid.duration must give at least one sample");
  return static_cast<std::size_t>(n);
}

SampledSignal load_signal(Context& ctx, const std::optional<MulticomponentModel>& m) {
  if (input_is_signal(ctx.cfg)) {
    auto f = open_in(ctx.cfg.get("input"));
    ctx.inputs.push_back(ctx.cfg.get("input"));
    return read_signal_csv(f);
  }
  return sample(require_model(ctx, m), ctx.cfg.number("grid.fs"), 0.0, sample_count(ctx.cfg));
}

WindowFamily window_of(const RunConfig& c) {
  const std::string& id = c.get("window");
  if (id == "gaussian") return WindowFamily::gaussian();
  if (id == "hyperbolic_secant") return WindowFamily::hyperbolic_secant();
  throw InvalidArgument("unknown window '" + id + "'");
}

std::size_t axis_count(double span, double step, const std::string& what) {
  if (!(step > 0.0)) throw InvalidArgument(what + " step must be positive");
  if (!(span >= 0.0)) throw InvalidArgument(what + " range is empty");
  return static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
}

TFGrid grid_of(const RunConfig& c, const SampledSignal& x) {
  const double margin = c.number("grid.margin"), step = c.number("grid.frame_step");
  const std::size_t nt = axis_count(x.duration() - 2.0 * margin, step, "frame");
  const double f0 = c.number("grid.f_min"), df = c.number("grid.deta");
  const std::size_t nf = axis_count(c.number("grid.f_max") - f0, df, "frequency");
  return TFGrid::uniform(x.t0 + margin, step, nt, f0, df, nf);
}

SigmaProfile sigma_from_file(Context& ctx, const std::string& path) {
  auto f = open_in(path);
  ctx.inputs.push_back(path);
  std::vector<double> ts, ss;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (lineno == 1 && line.find_first_not_of("0123456789.-+eE, \t\r") != std::string::npos) continue;
    std::istringstream row(line);
    double t = 0.0, s = 0.0;
    char comma = 0;
    if (!(row >> t >> comma >> s) || comma != ',' || !(s > 0.0))
      throw ParseError(lineno, "sigma", "expected 't,sigma' with sigma > 0");
    if (!ts.empty() && !(t > ts.back())) throw ParseError(lineno, "t", "times must increase");
    ts.push_back(t);
    ss.push_back(s);
  }
  if (ts.empty()) throw UsageError(path + " has no sigma samples");
  auto value = [ts, ss](double t) {
    if (t <= ts.front()) return ss.front();
    if (t >= ts.back()) return ss.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return ss[i - 1] * (1.0 - w) + ss[i] * w;
  };
  return SigmaProfile::from_functions(value, nullptr, "file:" + path);
}

SigmaProfile scaled(const SigmaProfile& p, double scale) {
  if (scale == 1.0) return p;
  if (!(scale > 0.0)) throw InvalidArgument("sigma.scale must be positive");
  std::ostringstream d;
  d << scale << " * " << p.description();
  return SigmaProfile::from_functions([p, scale](double t) { return scale * p(t); },
                                      [p, scale](double t) { return scale * p.derivative(t); },
                                      d.str());
}

SigmaProfile sigma_of(Context& ctx, const std::optional<MulticomponentModel>& m,
                      const WindowFamily& w, const std::vector<double>& times) {
  const RunConfig& c = ctx.cfg;
  const std::string& mode = c.get("sigma.mode");
  if (mode == "constant") return SigmaProfile::constant(c.number("sigma.value"));
  if (mode == "linear") return SigmaProfile::linear(c.number("sigma.value"), c.number("sigma.slope"));
  if (mode == "file") return sigma_from_file(ctx, c.get("sigma.file"));
  const double alpha = effective_support(w, c.number("tau0"));
  if (mode == "sigma1") return scaled(sigma1(require_model(ctx, m), alpha), c.number("sigma.scale"));
  if (mode == "sigma2")
    return scaled(sigma2(require_model(ctx, m), alpha, times), c.number("sigma.scale"));
  throw InvalidArgument("unknown sigma.mode '" + mode + "'");
}

int order_of(const RunConfig& c) {
  const double o = c.number("order");
  if (o != 1.0 && o != 2.0) throw InvalidArgument("order must be 1 or 2");
  return static_cast<int>(o);
}

KernelKind kernel_of(const RunConfig& c) {
  const std::string& k = c.get("kernel");
  if (k == "quartic_bump") return KernelKind::quartic_bump;
  if (k == "triangle") return KernelKind::triangle;
  throw InvalidArgument("unknown kernel '" + k + "'");
}

struct Pipeline {
  std::optional<MulticomponentModel> model;
  SampledSignal signal;
  WindowFamily window = gaussian_family();
  SigmaProfile sigma = SigmaProfile::constant(1.0);
  STFTBundle bundle;
  int order = 2;
};

Pipeline transform(Context& ctx) {
  Pipeline p;
  p.model = load_model(ctx);
  p.signal = load_signal(ctx, p.model);
  p.window = window_of(ctx.cfg);
  p.order = order_of(ctx.cfg);
  const TFGrid grid = grid_of(ctx.cfg, p.signal);
  p.sigma = sigma_of(ctx, p.model, p.window, grid.times);
  p.bundle = compute_bundle(p.signal, p.sigma, p.window, grid);
  for (const auto& w : p.bundle.warnings) ctx.out << "warning: " << w << '\n';
  return p;
}

PhaseField phase_of(const Context& ctx, const Pipeline& p) {
  const auto g1 = ctx.cfg.number_or_auto("gamma");
  if (p.order == 1) return omega_adaptive(p.bundle, g1);
  return omega_adaptive_second(p.bundle, g1, ctx.cfg.number_or_auto("gamma2"));
}

SqueezedTFR squeeze_of(const Context& ctx, const Pipeline& p, const PhaseField& phase) {
  SqueezeParams sp;
  sp.lambda = ctx.cfg.number("lambda");
  sp.kernel = kernel_of(ctx.cfg);
  return squeeze(p.bundle, phase, sp);
}

RidgeSet ridges_of(Context& ctx, const Pipeline& p, const SqueezedTFR& s) {
  const auto k = ctx.cfg.number_or_auto("ridges");
  std::size_t K = p.model ? p.model->size() : 2;
  if (k) {
    if (!(*k >= 1.0) || *k != std::floor(*k)) throw InvalidArgument("ridges must be a positive integer");
    K = static_cast<std::size_t>(*k);
  }
  RidgeSet rs = extract_ridges(s, K, ctx.cfg.number("ridge.penalty"));
  for (const auto& d : rs.diagnostics) ctx.out << "ridge: " << d << '\n';
  return rs;
}

// eps~1 and eps~2 for the bounds; "auto" follows epsilon_coupling.
std::pair<double, double> thresholds(const Context& ctx, const Pipeline& p) {
  const RunConfig& c = ctx.cfg;
  const bool cube = c.get("epsilon_coupling") == "cube-root";
  if (!cube && c.get("epsilon_coupling") != "fixed")
    throw InvalidArgument("epsilon_coupling must be fixed or cube-root");
  auto e1 = c.number_or_auto("eps1_tilde");
  auto e2 = c.number_or_auto("eps2_tilde");
  if (cube && p.model) {
    const double e = cube_root_threshold(*p.model);
    if (e > 0.0) {
      if (!e1) e1 = e;
      if (!e2) e2 = e;
    }
  }
  if (!e1) e1 = c.number_or_auto("gamma").value_or(default_gamma(p.bundle));
  if (!e2) e2 = c.number_or_auto("gamma2").value_or(default_gamma2(p.bundle, *e1));
  return {*e1, *e2};
}

BoundOptions bound_options(const RunConfig& c) {
  BoundOptions o;
  const double n = c.number("sup_samples");
  if (!(n >= 2.0)) throw InvalidArgument("sup_samples must be at least 2");
  o.sup_samples = static_cast<int>(n);
  return o;
}

void write_tfr_file(Context& ctx, const std::string& name, const CMatrix& m, const TFGrid& g,
                    const Pipeline& p) {
  const fs::path path = ctx.output(name);
  write_tfr(path.string(), m, g.times, g.freqs, p.window.id(), p.sigma.description());
  ctx.outputs.push_back(path.string() + ".hdr");
}

// ---- commands --------------------------------------------------------------

int cmd_synth(Context& ctx) {
  if (input_is_signal(ctx.cfg)) throw UsageError("synth needs a model, not a signal CSV");
  const auto model = require_model(ctx, load_model(ctx));
  const SampledSignal x = sample(model, ctx.cfg.number("grid.fs"), 0.0, sample_count(ctx.cfg));
  {
    auto f = open_out(ctx.output("signal.csv"));
    write_signal_csv(f, x);
  }
  {
    auto f = open_out(ctx.output("model.txt"));
    write_model(f, model);
  }
  if (ctx.cfg.flag("emit_truth")) {
    auto f = open_out(ctx.output("truth.csv"));
    f << 't';
    for (std::size_t k = 1; k <= model.size(); ++k) f << ",phi" << k << "_prime";
    f << '\n';
    for (std::size_t n = 0; n < x.size(); ++n) {
      f << x.time(n);
      for (const auto& comp : model.components) f << ',' << comp.freq(x.time(n));
      f << '\n';
    }
  }
  ctx.out << "synth: " << x.size() << " samples, " << model.size() << " components\n";
  return kExitOk;
}

int cmd_transform(Context& ctx) {
  const Pipeline p = transform(ctx);
  write_tfr_file(ctx, "tfr.bin", p.bundle.V, p.bundle.grid, p);
  ctx.out << "transform: " << p.bundle.grid.n_times() << " x " << p.bundle.grid.n_freqs()
          << ", sigma " << p.sigma.description() << '\n';
  return kExitOk;
}

int cmd_squeeze(Context& ctx) {
  const Pipeline p = transform(ctx);
  const PhaseField phase = phase_of(ctx, p);
  const SqueezedTFR s = squeeze_of(ctx, p, phase);
  write_tfr_file(ctx, "squeezed.bin", s.R, s.grid, p);
  const RidgeSet rs = ridges_of(ctx, p, s);
  for (std::size_t k = 0; k < rs.ridges.size(); ++k) {
    auto f = open_out(ctx.output("ridge_" + std::to_string(k + 1) + ".csv"));
    write_ridge_csv(f, s.grid.times, rs.ridges[k]);
  }
  ctx.out << "squeeze: " << phase_kind_name(phase.kind) << ", " << phase.valid_count()
          << " valid cells, " << rs.ridges.size() << " ridges\n";
  return kExitOk;
}

int cmd_recover(Context& ctx) {
  const Pipeline p = transform(ctx);
  const PhaseField phase = phase_of(ctx, p);
  const SqueezedTFR s = squeeze_of(ctx, p, phase);
  const RidgeSet rs = ridges_of(ctx, p, s);
  const auto hw = ctx.cfg.number_or_auto("recover.halfwidth");
  const double alpha = effective_support(p.window, ctx.cfg.number("tau0"));
  std::vector<double> halfwidth(s.grid.n_times());
  for (std::size_t i = 0; i < halfwidth.size(); ++i)
    halfwidth[i] = hw ? *hw : alpha / p.bundle.sigma_t[i];
  for (std::size_t k = 0; k < rs.ridges.size(); ++k) {
    const RecoveredComponent rc =
        recover_component(s, rs.ridges[k].xi, halfwidth, p.bundle.sigma_t, p.window);
    auto f = open_out(ctx.output("component_" + std::to_string(k + 1) + ".csv"));
    write_signal_csv(f, rc.signal);
    const auto empty = std::count(rc.empty_band.begin(), rc.empty_band.end(), 1);
    if (empty > 0) ctx.out << "recover: component " << k + 1 << " has " << empty << " empty frames\n";
  }
  ctx.out << "recover: " << rs.ridges.size() << " components\n";
  return kExitOk;
}

int cmd_bounds(Context& ctx) {
  const Pipeline p = transform(ctx);
  const auto model = require_model(ctx, p.model);
  const auto [e1, e2] = thresholds(ctx, p);
  const double tau0 = ctx.cfg.number("tau0");
  const auto& t = p.bundle.grid.times;
  BoundReport r;
  r.times = t;
  r.sigma = p.bundle.sigma_t;
  r.remainder = first_order_remainder_bounds(model, p.sigma, p.window, t);
  r.gamma = gamma_bounds(model, p.window, t);
  r.residual = second_order_residual_bounds(model, p.sigma, p.window, t);
  if (p.order == 1)
    r.first = theorem1_bounds(model, p.sigma, p.window, tau0, e1, t, bound_options(ctx.cfg));
  else
    r.second = theorem2_bounds(model, p.bundle, tau0, e1, e2, bound_options(ctx.cfg));
  auto f = open_out(ctx.output("bounds.csv"));
  write_bound_report_csv(f, r);
  ctx.out << "bounds: order " << p.order << ", eps~1 = " << e1;
  if (p.order == 2) ctx.out << ", eps~2 = " << e2;
  ctx.out << '\n';
  return kExitOk;
}

Scenario scenario_from_config(Context& ctx) {
  const std::string& preset = ctx.cfg.get("preset");
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), preset) != names.end()) {
    ctx.out << "verify: scenario " << preset << " (grid, sigma and thresholds from the scenario)\n";
    return make_scenario(preset);
  }
  if (input_is_signal(ctx.cfg)) throw UsageError("verify needs a model, not a signal CSV");
  const Pipeline p = transform(ctx);
  Scenario s;
  s.name = preset.empty() ? ctx.cfg.get("input") : preset;
  s.model = require_model(ctx, p.model);
  s.fs = p.signal.sample_rate;
  s.samples = p.signal.size();
  s.grid = p.bundle.grid;
  s.sigma = p.sigma;
  s.window = p.window;
  s.order = p.order;
  s.tau0 = ctx.cfg.number("tau0");
  std::tie(s.eps1_tilde, s.eps2_tilde) = thresholds(ctx, p);
  s.bounds = bound_options(ctx.cfg);
  return s;
}

// Lemma 3 identity tolerance (relative).
constexpr double kLemma3Tol = 1e-6;

int cmd_verify(Context& ctx) {
  const Scenario s = scenario_from_config(ctx);
  const ScenarioRun run = run_scenario(s);
  const Comparison& c = run.comparison;
  {
    auto f = open_out(ctx.output("comparison.csv"));
    write_comparison_csv(f, c);
  }
  {
    auto f = open_out(ctx.output("bounds.csv"));
    write_bound_report_csv(f, run.report);
  }
  std::vector<std::pair<std::string, std::string>> failures;
  for (const auto& row : c.rows) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(4) << row.t;
    if (!row.clause_a)
      failures.emplace_back("clause(a) t=" + t.str(), "uncovered " + std::to_string(row.uncovered) +
                                                          ", overlapping " +
                                                          std::to_string(row.overlapping));
    if (!row.clause_b) {
      std::ostringstream d;
      d << "IF error " << row.if_error << " > bound " << row.if_bound;
      failures.emplace_back("clause(b) t=" + t.str(), d.str());
    }
    if (!row.clause_c) {
      std::ostringstream d;
      for (std::size_t k = 0; k < row.rec_error.size(); ++k)
        if (row.rec_error[k] > row.rec_bound[k])
          d << "k=" << k + 1 << ": " << row.rec_error[k] << " > " << row.rec_bound[k] << "; ";
      failures.emplace_back("clause(c) t=" + t.str(), d.str());
    }
  }
  for (const auto& n : c.notes) failures.emplace_back("note", n);
  bool pass = c.pass();
  ctx.out << c.summary() << '\n';
  if (run.lemma1_checked) {
    ctx.out << "lemma 1: " << run.lemma1.checked << " cells, max defect " << run.lemma1.max_defect
            << ", max excess " << run.lemma1.max_excess << '\n';
    if (!run.lemma1.pass) {
      pass = false;
      failures.emplace_back("lemma 1", std::to_string(run.lemma1.violations) + " cells exceed the envelope");
    }
  }
  if (run.lemma3) {
    ctx.out << "lemma 3: " << run.lemma3->checked << " cells, max identity residual "
            << run.lemma3->max_identity_rel << '\n';
    if (!(run.lemma3->max_identity_rel <= kLemma3Tol)) {
      pass = false;
      std::ostringstream d;
      d << "identity residual " << run.lemma3->max_identity_rel << " > " << kLemma3Tol;
      failures.emplace_back("lemma 3", d.str());
    }
  }
  if (!pass) {
    ctx.out << "FAILED checks:\n";
    std::size_t width = 5;
    for (const auto& f : failures) width = std::max(width, f.first.size());
    ctx.out << std::left << std::setw(static_cast<int>(width)) << "check" << "  detail\n";
    const std::size_t shown = std::min<std::size_t>(failures.size(), 40);
    for (std::size_t i = 0; i < shown; ++i)
      ctx.out << std::setw(static_cast<int>(width)) << failures[i].first << "  " << failures[i].second << '\n';
    if (shown < failures.size())
      ctx.out << "... " << failures.size() - shown << " more rows in comparison.csv\n";
    ctx.out << std::right;
  }
  ctx.out << "verify: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_plot(Context& ctx) {
  std::string input = ctx.cfg.get("input");
  if (input.empty()) input = (ctx.out_dir / "squeezed.bin").string();
  if (!fs::exists(input)) throw UsageError("cannot read " + input);
  TfrFile tfr;
  try {
    tfr = read_tfr(input);
  } catch (const std::exception& e) {
    throw UsageError("cannot read " + input + ": " + e.what());
  }
  ctx.inputs.push_back(input);
  const std::string& scale = ctx.cfg.get("plot.scale");
  if (scale != "log" && scale != "linear") throw InvalidArgument("plot.scale must be log or linear");
  const double db = ctx.cfg.number("plot.db_range");
  if (!(db > 0.0)) throw InvalidArgument("plot.db_range must be positive");
  const Image img = render_heatmap(tfr.values, scale == "log", db);
  const std::string stem = fs::path(input).stem().string();
  write_ppm(ctx.output(stem + ".ppm").string(), img);
  if (ctx.cfg.flag("plot.png")) write_png(ctx.output(stem + ".png").string(), img);
  auto f = open_out(ctx.output(stem + ".axes.txt"));
  f << "source = " << input << '\n'
    << "width = " << img.width << "\nheight = " << img.height << '\n'
    << "x = time, left to right\n"
    << "y = frequency, bottom to top\n";
  if (!tfr.times.empty()) f << "t_first = " << tfr.times.front() << "\nt_last = " << tfr.times.back() << '\n';
  if (!tfr.freqs.empty())
    f << "f_bottom = " << tfr.freqs.front() << "\nf_top = " << tfr.freqs.back() << '\n';
  f << "scale = " << scale << '\n';
  if (scale == "log") f << "db_range = " << db << '\n';
  f << "window = " << tfr.window_id << "\nsigma = " << tfr.sigma_description << '\n';
  ctx.out << "plot: " << img.width << " x " << img.height << '\n';
  return kExitOk;
}

void write_manifest(Context& ctx) {
  nlohmann::ordered_json j;
  j["command"] = ctx.command;
  nlohmann::ordered_json cfg;
  for (const auto& f : config_fields()) cfg[f.key] = ctx.cfg.get(f.key);
  j["config"] = cfg;
  j["config_hash"] = ctx.cfg.hash();
  j["inputs"] = ctx.inputs;
  j["outputs"] = ctx.outputs;
  j["versions"] = {{"adsst", kVersion},
                   {"openssl", OPENSSL_VERSION_TEXT},
                   {"libpng", png_encoder_version()},
                   {"compiler", __VERSION__}};
  std::ofstream f(ctx.out_dir / (ctx.command + ".manifest.json"));
  if (!f) throw UsageError("cannot write manifest in " + ctx.out_dir.string());
  f << j.dump(2) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive STFT synchrosqueezing with error bounds", "adsst"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  std::vector<std::string> sets;
  bool emit_truth = false;
  app.add_option("--config", config_path, "key = value settings file");
  app.add_option("--set", sets, "override any key: --set key=value (repeatable)");
  app.add_flag("--emit-truth", emit_truth, "synth also writes truth.csv with t and phi'_k");

  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> field_opts;
  for (const auto& f : config_fields()) {
    if (f.key == "emit_truth") continue;
    std::string names = "--" + f.key;
    if (f.key == "sigma.mode") names += ",--sigma";
    field_opts.emplace_back(f.key, app.add_option(names, values[f.key], f.doc + " [" + f.default_value + "]"));
  }

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "write signal.csv and model.txt from a preset or model file"},
      {"transform", "adaptive STFT to tfr.bin"},
      {"squeeze", "synchrosqueezed transform and ridge CSVs"},
      {"recover", "component CSVs from the squeezed transform"},
      {"bounds", "theorem bounds per frame to bounds.csv"},
      {"verify", "empirical checks against the bounds; exit 1 on failure"},
      {"plot", "heatmap of a TFR file"},
  };
  for (const auto& [name, doc] : commands) app.add_subcommand(name, doc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  Context ctx{RunConfig{}, app.get_subcommands().front()->get_name(), {}, out, {}, {}};
  try {
    if (!config_path.empty()) {
      auto f = open_in(config_path);
      ctx.cfg.load(f);
      ctx.inputs.push_back(config_path);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
      ctx.cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, opt] : field_opts)
      if (opt->count() > 0) ctx.cfg.set(key, values[key]);
    if (emit_truth) ctx.cfg.set("emit_truth", "true");

    ctx.out_dir = ctx.cfg.get("out");
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw UsageError("cannot create " + ctx.out_dir.string() + ": " + ec.message());

    int code = kExitOk;
    if (ctx.command == "synth") code = cmd_synth(ctx);
    else if (ctx.command == "transform") code = cmd_transform(ctx);
    else if (ctx.command == "squeeze") code = cmd_squeeze(ctx);
    else if (ctx.command == "recover") code = cmd_recover(ctx);
    else if (ctx.command == "bounds") code = cmd_bounds(ctx);
    else if (ctx.command == "verify") code = cmd_verify(ctx);
    else code = cmd_plot(ctx);
    write_manifest(ctx);
    return code;
  } catch (const SeparationError& e) {
    err << "error: components " << e.k() - 1 << " and " << e.k() << " at t = " << e.t() << ": "
        << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace adsst::cli
