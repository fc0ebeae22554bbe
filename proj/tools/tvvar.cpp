// Command-line front end: simulate, estimate, tune, evaluate, roc, predict,
// spatial-check. Every command accepts --config FILE with flat key=value
// lines; flags given on the command line win over the file.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tvvar/estimators.hpp"
#include "tvvar/evaluation.hpp"
#include "tvvar/io.hpp"
#include "tvvar/parallel.hpp"
#include "tvvar/simulation.hpp"

namespace {

using namespace tvvar;

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kNumericalError = 3 };

// Raised for parameter values that fail validation before any compute.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<double> parse_grid(const std::vector<double>& explicit_grid, const std::string& what) {
  require(!explicit_grid.empty(), what + " must list at least one value");
  for (double v : explicit_grid) require(std::isfinite(v) && v >= 0.0, what + " values must be >= 0");
  return explicit_grid;
}

std::vector<NormKind> parse_norms(const std::vector<std::string>& names) {
  std::vector<NormKind> out;
  for (const auto& n : names) out.push_back(norm_kind_from_string(n));
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(method_from_string(n));
  require(!out.empty(), "no methods given");
  return out;
}

bool is_clime(Method m) { return m == Method::tvvar_clime || m == Method::stationary_clime; }

void write_csv_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ostringstream out;
  body(out);
  write_text_file(path, out.str());
}

// Expands "--config FILE" into leading arguments for the subcommand so that
// explicit flags, which come later, take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string file;
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      at = i;
      break;
    }
  }
  if (file.empty()) return args;
  const std::size_t width = args[at] == "--config" ? 2 : 1;
  args.erase(args.begin() + static_cast<std::ptrdiff_t>(at),
             args.begin() + static_cast<std::ptrdiff_t>(at + width));
  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigTOML().from_file(file)) {
    std::string key = item.fullname();
    for (char& c : key)
      if (c == '_') c = '-';
    injected.push_back("--" + key);
    std::string joined;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) joined += (k ? "," : "") + item.inputs[k];
    injected.push_back(joined);
  }
  // The subcommand name must stay first.
  if (args.empty()) throw ConfigError("--config given without a command");
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

struct SimulateArgs {
  std::string pattern = "hub";
  std::size_t d = 20, n = 100, burn_in = kDefaultBurnIn;
  std::uint64_t seed = 1;
  int groups = -1;
  double prob = -1.0, off_diag = -1.0, diag = -1.0;
  std::string series_out = "series.csv", truth_out = "truth.json", series_json;
};

GraphPattern pattern_from_args(const SimulateArgs& a) {
  require(a.d >= 2, "d must be at least 2");
  GraphPattern p = default_pattern(pattern_kind_from_string(a.pattern), a.d);
  if (a.groups >= 0) p.groups = static_cast<std::size_t>(a.groups);
  if (a.prob >= 0.0) p.prob = a.prob;
  if (a.off_diag >= 0.0) p.off_diag = a.off_diag;
  if (a.diag >= 0.0) p.diag = a.diag;
  p.validate(a.d);
  return p;
}

int run_simulate(const SimulateArgs& a) {
  require(a.n >= 2, "n must be at least 2");
  require(a.burn_in >= kMinBurnIn, "burn-in must be at least " + std::to_string(kMinBurnIn));
  const GraphPattern p = pattern_from_args(a);
  const SimulationTruth truth = make_truth(p, a.d, a.n, a.seed);
  const SeriesMatrix x = simulate_tvvar(truth.path, truth.psi, a.burn_in, replicate_seed(a.seed, 0));
  write_series_csv_file(a.series_out, x);
  write_json_file(a.truth_out, to_json(truth));
  if (!a.series_json.empty()) write_json_file(a.series_json, to_json(x));

  const double t1 = truth.path.time(1);
  const double rho1 = spectral_norm(truth.path.at(1));
  const double bound1 = std::pow(1.0 - t1, 4) * kBaselineNormStart + t1 * t1 * kBaselineNormEnd;
  double max_interior = 0.0;
  for (std::size_t i = 1; i < a.n; ++i) max_interior = std::max(max_interior, spectral_norm(truth.path.at(i)));
  std::cout << std::setprecision(6) << "simulate: pattern=" << to_string(p.kind) << " d=" << a.d
            << " n=" << a.n << " seed=" << a.seed << " rho(A_1)=" << rho1
            << " interpolation bound=" << bound1 << " max rho(A_i, i<n)=" << max_interior
            << " rho(A_n)=" << spectral_norm(truth.path.at(a.n)) << '\n';
  return kOk;
}

struct EstimateArgs {
  std::string input, out = "estimate.json", csv_dir, method = "tvvar_clime", tune_result;
  double regularizer = -1.0, bandwidth = 0.0;
};

int run_estimate(const EstimateArgs& a) {
  require(!a.input.empty(), "--input is required");
  EstimatorConfig cfg;
  cfg.method = method_from_string(a.method);
  const SeriesMatrix x = read_series_csv_file(a.input);
  cfg.kernel.bandwidth = a.bandwidth > 0.0 ? a.bandwidth : default_bandwidth(x.n());
  if (!a.tune_result.empty()) cfg.regularizer = tuning_from_json(read_json_file(a.tune_result)).selected;
  if (a.regularizer >= 0.0) cfg.regularizer = a.regularizer;
  if (uses_regularizer(cfg.method))
    require(a.regularizer >= 0.0 || !a.tune_result.empty(),
            std::string(to_string(cfg.method)) + " needs --regularizer or --tune-result");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const EstimatePath path = estimate_path(x, window_times(x.n(), cfg.kernel.bandwidth), cfg);
  for (const auto& f : path.failures) std::cerr << "t=" << f.t << ": " << f.message << '\n';
  if (path.times.empty()) throw NumericalError("estimation failed at every time point");
  write_json_file(a.out, to_json(path));
  if (!a.csv_dir.empty()) {
    std::filesystem::create_directories(a.csv_dir);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      const std::size_t i = grid_index(path.times[k], x.n());
      write_csv_text(a.csv_dir + "/A_" + std::to_string(i) + ".csv",
                     [&](std::ostream& o) { write_matrix_csv(o, path.matrices[k]); });
    }
  }
  std::cout << "estimate: method=" << to_string(cfg.method) << " regularizer=" << cfg.regularizer
            << " points=" << path.times.size() << " failed=" << path.failures.size() << '\n';
  return path.failures.empty() ? kOk : kNumericalError;
}

struct TuneArgs {
  std::string input, out = "tune.json", method = "tvvar_clime";
  std::vector<double> grid;
  std::size_t n1 = 0;
  double bandwidth = 0.0, stationary_fraction = 1.0;
  bool preprocess_input = false;
};

int run_tune(const TuneArgs& a) {
  require(!a.input.empty(), "--input is required");
  const std::vector<double> grid = parse_grid(a.grid, "--grid");
  SeriesMatrix x = read_series_csv_file(a.input);
  if (a.preprocess_input) x = preprocess(x);
  const std::size_t n1 = a.n1 ? a.n1 : static_cast<std::size_t>(0.7 * static_cast<double>(x.n()));
  require(n1 >= 3 && n1 < x.n(), "n1 must satisfy 3 <= n1 < n");
  require(a.stationary_fraction > 0.0 && a.stationary_fraction <= 1.0,
          "stationary-fraction must lie in (0, 1]");
  EstimatorConfig cfg;
  cfg.method = method_from_string(a.method);
  cfg.kernel.bandwidth = a.bandwidth > 0.0 ? a.bandwidth : default_bandwidth(n1);
  cfg.regularizer = grid.front() > 0.0 ? grid.front() : 1.0;
  try {
    cfg.kernel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const TuningResult r = tune_by_prediction(x, cfg, grid, n1, a.stationary_fraction);
  write_json_file(a.out, to_json(r));
  std::cout << "tune: method=" << to_string(cfg.method) << " selected=" << r.selected
            << " mean error=" << r.selected_error << '\n';
  return kOk;
}

struct StudyGrids {
  std::vector<double> tau_grid{0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.45};
  std::vector<double> lambda_grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5};
};

struct EvaluateArgs {
  std::string truth, out_csv = "errors.csv", out_json;
  std::size_t reps = 20, n1 = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"tvvar_clime", "stationary_clime", "tv_lasso", "tv_ridge", "tv_mle"};
  std::vector<std::string> norms{"op_linf", "op_l1", "spectral", "frobenius"};
  StudyGrids grids;
  double bandwidth = 0.0;
};

int run_evaluate(const EvaluateArgs& a) {
  require(!a.truth.empty(), "--truth is required");
  require(a.reps >= 1, "reps must be positive");
  const SimulationTruth truth = truth_from_json(read_json_file(a.truth));
  const std::size_t n = truth.path.n;
  const std::size_t n1 = a.n1 ? a.n1 : static_cast<std::size_t>(0.7 * static_cast<double>(n));
  require(n1 >= 3 && n1 < n, "n1 must satisfy 3 <= n1 < n");
  const std::vector<NormKind> norms = parse_norms(a.norms);
  std::vector<StudyMethod> plans;
  for (Method m : parse_methods(a.methods)) {
    StudyMethod s;
    s.cfg.method = m;
    s.cfg.kernel.bandwidth = a.bandwidth > 0.0 ? a.bandwidth : default_bandwidth(n);
    if (uses_regularizer(m)) {
      s.grid = parse_grid(is_clime(m) ? a.grids.tau_grid : a.grids.lambda_grid,
                          is_clime(m) ? "--tau-grid" : "--lambda-grid");
      s.cfg.regularizer = s.grid.front();
    }
    plans.push_back(std::move(s));
  }
  const StudyResult res = error_study(truth, plans, a.reps, a.seed, n1, norms);
  write_csv_text(a.out_csv, [&](std::ostream& o) { write_error_table_csv(o, res.table); });
  if (!a.out_json.empty()) write_json_file(a.out_json, to_json(res.table));
  for (const auto& row : res.table.rows)
    std::cout << std::left << std::setw(18) << row.method << std::setw(11) << to_string(row.norm)
              << std::fixed << std::setprecision(3) << row.mean << " (" << row.sd << ")\n";
  return kOk;
}

struct RocArgs {
  std::string truth, label, policy = "fixed", out_csv = "roc.csv", out_json;
  std::size_t reps = 20;
  std::uint64_t seed = 1;
  std::vector<double> tau_grid;
  double bandwidth = 0.0;
};

int run_roc(const RocArgs& a) {
  require(!a.truth.empty(), "--truth is required");
  require(a.reps >= 1, "reps must be positive");
  const SimulationTruth truth = truth_from_json(read_json_file(a.truth));
  const std::vector<double> grid =
      a.tau_grid.empty() ? linear_grid(0.001, 0.45, 30) : parse_grid(a.tau_grid, "--tau-grid");
  for (double t : grid) require(t > 0.0, "tau values must be positive");
  KernelConfig kernel;
  kernel.bandwidth = a.bandwidth > 0.0 ? a.bandwidth : default_bandwidth(truth.path.n);
  std::vector<SeriesMatrix> reps;
  for (std::size_t r = 0; r < a.reps; ++r)
    reps.push_back(simulate_tvvar(truth.path, truth.psi, kDefaultBurnIn, replicate_seed(a.seed, r)));
  const auto curve = roc_curve(reps, truth.path, truth.psi, grid,
                               threshold_policy_from_string(a.policy), kernel);
  const std::string label = a.label.empty() ? to_string(truth.pattern.kind) : a.label;
  write_csv_text(a.out_csv, [&](std::ostream& o) { write_roc_csv(o, label, curve); });
  if (!a.out_json.empty()) write_json_file(a.out_json, to_json(curve));
  std::cout << "roc: " << label << " points=" << curve.size() << " policy=" << a.policy << '\n';
  return kOk;
}

struct PredictArgs {
  std::string input, out_csv = "prediction.csv", out_json;
  bool raw = false;
  double bandwidth = 0.3;
  std::size_t test_span = 100;
  std::vector<std::string> methods{"tvvar_clime", "stationary_clime", "tv_lasso", "tv_ridge", "tv_mle"};
  StudyGrids grids;
};

int run_predict(const PredictArgs& a) {
  require(!a.input.empty(), "--input is required");
  SeriesMatrix x = read_series_csv_file(a.input);
  if (!a.raw) x = preprocess(x);
  require(a.test_span >= 1 && a.test_span + 3 <= x.n(), "test-span must leave at least 3 training points");
  const std::size_t n1 = x.n() - a.test_span;
  EstimatorConfig base;
  base.kernel.bandwidth = a.bandwidth;
  try {
    base.kernel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json all = nlohmann::json::object();
  std::ostringstream csv;
  csv << "method,selected,mean_error,sd_error\n";
  for (Method m : parse_methods(a.methods)) {
    EstimatorConfig cfg = base;
    cfg.method = m;
    std::vector<double> grid{0.0};
    if (uses_regularizer(m))
      grid = parse_grid(is_clime(m) ? a.grids.tau_grid : a.grids.lambda_grid,
                        is_clime(m) ? "--tau-grid" : "--lambda-grid");
    cfg.regularizer = grid.front() > 0.0 ? grid.front() : 1.0;
    const TuningResult r = tune_by_prediction(x, cfg, grid, n1, a.bandwidth);
    cfg.regularizer = r.selected;
    std::vector<double> steps;
    rolling_prediction_error(x, n1, cfg, a.bandwidth, 0, &steps);
    csv << to_string(m) << ',' << r.selected << ',' << r.selected_error << ',' << sample_sd(steps)
        << '\n';
    all[to_string(m)] = to_json(r);
    std::cout << std::left << std::setw(18) << to_string(m) << " selected=" << r.selected
              << " mean error=" << r.selected_error << " (" << sample_sd(steps) << ")\n";
  }
  write_text_file(a.out_csv, csv.str());
  if (!a.out_json.empty()) {
    nlohmann::json doc{{"schema_version", kSchemaVersion}, {"kind", "prediction"}, {"methods", all}};
    write_json_file(a.out_json, doc);
  }
  return kOk;
}

struct SpatialArgs {
  std::vector<std::size_t> ladder{16, 32, 64};
  double r = 0.5, gamma = 2.0, alpha = 0.5;
  std::string out_json;
};

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

int run_spatial(const SpatialArgs& a) {
  require(a.ladder.size() >= 2, "the d-ladder needs at least two sizes");
  require(a.alpha > 0.0 && a.alpha < 1.0, "alpha must lie in (0, 1)");
  std::vector<double> logd, logs, logm;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t d : a.ladder) {
    SpatialDesignParams p{d, a.r, a.gamma};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const SparsityMeasures m = sparsity_measures(spatial_design_matrix(p), a.alpha);
    logd.push_back(std::log(static_cast<double>(d)));
    logs.push_back(std::log(m.s));
    logm.push_back(std::log(m.m_d));
    rows.push_back({{"d", d}, {"s", m.s}, {"m_d", m.m_d}});
    std::cout << "d=" << d << " s=" << m.s << " M_d=" << m.m_d << '\n';
  }
  const double ga = 2.0 * a.gamma * a.alpha;
  const double s_rate = ga >= 1.0 ? a.r : a.r + (1.0 - a.r) * (1.0 - ga);
  const double m_rate = a.gamma >= 0.5 ? a.r : a.r + (1.0 - a.r) * (1.0 - 2.0 * a.gamma);
  const double s_fit = fitted_slope(logd, logs), m_fit = fitted_slope(logd, logm);
  std::cout << "growth exponent of s: fitted " << s_fit << ", rate " << s_rate << '\n'
            << "growth exponent of M_d: fitted " << m_fit << ", rate " << m_rate << '\n';
  if (!a.out_json.empty()) {
    write_json_file(a.out_json, {{"schema_version", kSchemaVersion},
                                 {"kind", "spatial_check"},
                                 {"r", a.r},
                                 {"gamma", a.gamma},
                                 {"alpha", a.alpha},
                                 {"sizes", rows},
                                 {"s_exponent", s_fit},
                                 {"s_rate", s_rate},
                                 {"m_d_exponent", m_fit},
                                 {"m_d_rate", m_rate}});
  }
  return kOk;
}

void add_grids(CLI::App* sub, StudyGrids& g) {
  sub->add_option("--tau-grid", g.tau_grid, "tau values for the CLIME methods")->delimiter(',');
  sub->add_option("--lambda-grid", g.lambda_grid, "lambda values for lasso and ridge")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse time-varying VAR estimation"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::size_t workers = 0;
  app.add_option("--workers", workers, "worker threads (default: TVVAR_WORKERS or all cores)");
  std::function<int()> action;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "simulate a series and write its ground truth");
  s->add_option("--pattern", sim.pattern, "hub, cluster, band or random");
  s->add_option("--d", sim.d);
  s->add_option("--n", sim.n);
  s->add_option("--seed", sim.seed);
  s->add_option("--burn-in", sim.burn_in);
  s->add_option("--groups", sim.groups, "hub/cluster count or band width");
  s->add_option("--prob", sim.prob, "edge probability of the random pattern");
  s->add_option("--off-diag", sim.off_diag);
  s->add_option("--diag", sim.diag);
  s->add_option("--series-out", sim.series_out);
  s->add_option("--truth-out", sim.truth_out);
  s->add_option("--series-json", sim.series_json);
  s->callback([&] { action = [&] { return run_simulate(sim); }; });

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "estimate the transition path over the interior window");
  e->add_option("--input", est.input, "series CSV");
  e->add_option("--method", est.method);
  e->add_option("--regularizer,--tau,--lambda", est.regularizer);
  e->add_option("--tune-result", est.tune_result, "take the regularizer from a tune output");
  e->add_option("--bandwidth", est.bandwidth, "default 0.8 n^(-1/5)");
  e->add_option("--out", est.out);
  e->add_option("--csv-dir", est.csv_dir, "also write one CSV per time point");
  e->callback([&] { action = [&] { return run_estimate(est); }; });

  TuneArgs tune;
  auto* t = app.add_subcommand("tune", "select a regularizer by rolling one-step prediction");
  t->add_option("--input", tune.input);
  t->add_option("--method", tune.method);
  t->add_option("--grid", tune.grid)->delimiter(',');
  t->add_option("--n1", tune.n1, "training window length (default 0.7 n)");
  t->add_option("--bandwidth", tune.bandwidth, "default 0.8 n1^(-1/5)");
  t->add_option("--stationary-fraction", tune.stationary_fraction);
  t->add_flag("--preprocess", tune.preprocess_input);
  t->add_option("--out", tune.out);
  t->callback([&] { action = [&] { return run_tune(tune); }; });

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "error table over simulated replicates");
  v->add_option("--truth", ev.truth);
  v->add_option("--reps", ev.reps);
  v->add_option("--seed", ev.seed);
  v->add_option("--methods", ev.methods)->delimiter(',');
  v->add_option("--norms", ev.norms)->delimiter(',');
  v->add_option("--n1", ev.n1);
  v->add_option("--bandwidth", ev.bandwidth);
  v->add_option("--out-csv", ev.out_csv);
  v->add_option("--out-json", ev.out_json);
  add_grids(v, ev.grids);
  v->callback([&] { action = [&] { return run_evaluate(ev); }; });

  RocArgs roc;
  auto* r = app.add_subcommand("roc", "support-recovery ROC over a tau grid");
  r->add_option("--truth", roc.truth);
  r->add_option("--label", roc.label);
  r->add_option("--reps", roc.reps);
  r->add_option("--seed", roc.seed);
  r->add_option("--tau-grid", roc.tau_grid, "default: 30 values from 0.001 to 0.45")->delimiter(',');
  r->add_option("--policy", roc.policy, "fixed or theoretical");
  r->add_option("--bandwidth", roc.bandwidth);
  r->add_option("--out-csv", roc.out_csv);
  r->add_option("--out-json", roc.out_json);
  r->callback([&] { action = [&] { return run_roc(roc); }; });

  PredictArgs pred;
  auto* p = app.add_subcommand("predict", "rolling one-step prediction on an external series");
  p->add_option("--input", pred.input);
  p->add_flag("--raw", pred.raw, "skip standardizing and detrending");
  p->add_option("--bandwidth,--window-fraction", pred.bandwidth);
  p->add_option("--test-span", pred.test_span);
  p->add_option("--methods", pred.methods)->delimiter(',');
  p->add_option("--out-csv", pred.out_csv);
  p->add_option("--out-json", pred.out_json);
  add_grids(p, pred.grids);
  p->callback([&] { action = [&] { return run_predict(pred); }; });

  SpatialArgs sp;
  auto* c = app.add_subcommand("spatial-check", "sparsity growth of the spatial design matrix");
  c->add_option("--d-ladder", sp.ladder)->delimiter(',');
  c->add_option("--r", sp.r);
  c->add_option("--gamma", sp.gamma);
  c->add_option("--alpha", sp.alpha);
  c->add_option("--out-json", sp.out_json);
  c->callback([&] { action = [&] { return run_spatial(sp); }; });

  for (auto* sub : app.get_subcommands({}))
    sub->add_option("--workers", workers, "worker threads (default: TVVAR_WORKERS or all cores)");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kConfigError;
  }

  if (workers > 0) set_default_workers(workers);
  try {
    return action();
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const DataError& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return kDataError;
  } catch (const NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kDataError;
  }
}
