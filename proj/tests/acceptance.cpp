// End-to-end acceptance checks. `acceptance cN` runs criterion N and prints
// one PASS/FAIL line; with no argument every criterion runs in turn. The
// exit status is nonzero when any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "tvvar/estimators.hpp"
#include "tvvar/evaluation.hpp"
#include "tvvar/lp.hpp"
#include "tvvar/parallel.hpp"
#include "tvvar/simulation.hpp"

using namespace tvvar;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  std::vector<double> g;
  for (double v = lo; v <= hi * (1 + 1e-12); v *= ratio) g.push_back(v);
  return g;
}

const std::vector<double> kTauGrid = geometric_grid(0.02, 0.6, 1.4);
const std::vector<double> kLambdaGrid = geometric_grid(0.005, 10.0, 1.6);
constexpr std::uint64_t kStudySeed = 2024;

// The five-method study on the hub design at n = 100.
StudyResult hub_study(std::size_t d, std::size_t reps, const std::vector<Method>& methods,
                      const std::vector<NormKind>& norms) {
  const std::size_t n = 100;
  const SimulationTruth truth = make_truth(default_pattern(PatternKind::hub, d), d, n, 1);
  std::vector<StudyMethod> plan;
  for (Method m : methods) {
    StudyMethod s;
    s.cfg.method = m;
    s.cfg.kernel.bandwidth = default_bandwidth(n);
    if (m == Method::tvvar_clime || m == Method::stationary_clime) s.grid = kTauGrid;
    if (m == Method::tv_lasso || m == Method::tv_ridge) s.grid = kLambdaGrid;
    plan.push_back(std::move(s));
  }
  return error_study(truth, plan, reps, kStudySeed, 70, norms);
}

Outcome criterion1() {
  const std::vector<Method> methods{Method::tvvar_clime, Method::stationary_clime, Method::tv_lasso,
                                    Method::tv_ridge, Method::tv_mle};
  const std::vector<NormKind> norms{NormKind::op_linf, NormKind::spectral, NormKind::frobenius};
  const StudyResult res = hub_study(20, 20, methods, norms);
  for (const auto& row : res.table.rows)
    std::printf("  %-17s %-10s %.3f (%.3f)\n", row.method.c_str(), to_string(row.norm), row.mean, row.sd);

  const double tv = res.table.find("tvvar_clime", NormKind::op_linf).mean;
  const double st = res.table.find("stationary_clime", NormKind::op_linf).mean;
  auto mle_worst = [&](NormKind k) {
    const double mle = res.table.find("tv_mle", k).mean;
    for (Method m : methods)
      if (m != Method::tv_mle && res.table.find(to_string(m), k).mean >= mle) return false;
    return true;
  };
  const bool band = tv >= 0.25 && tv <= 0.60;
  const bool pass = band && st > tv && mle_worst(NormKind::spectral) && mle_worst(NormKind::frobenius);
  return {pass, fmt("TV-VAR l_inf %.3f in [0.25,0.60]: %s; stationary %.3f > TV-VAR: %s; "
                    "MLE worst under spectral: %s, Frobenius: %s",
                    tv, band ? "yes" : "no", st, st > tv ? "yes" : "no",
                    mle_worst(NormKind::spectral) ? "yes" : "no",
                    mle_worst(NormKind::frobenius) ? "yes" : "no")};
}

Outcome criterion2() {
  const std::vector<NormKind> norms{NormKind::op_linf};
  std::vector<double> mean, sd;
  for (std::size_t d : {20, 30, 40}) {
    const StudyResult res = hub_study(d, 20, {Method::tvvar_clime}, norms);
    const ErrorSummary& s = res.table.find("tvvar_clime", NormKind::op_linf);
    mean.push_back(s.mean);
    sd.push_back(s.sd);
    std::printf("  d=%zu TV-VAR l_inf %.3f (%.3f)\n", d, s.mean, s.sd);
  }
  int inversions = 0;
  bool within = true;
  for (std::size_t k = 0; k + 1 < mean.size(); ++k) {
    if (mean[k + 1] >= mean[k]) continue;
    ++inversions;
    const double pooled = std::sqrt(0.5 * (sd[k] * sd[k] + sd[k + 1] * sd[k + 1]));
    within = within && (mean[k] - mean[k + 1]) <= pooled;
  }
  const bool pass = inversions == 0 || (inversions == 1 && within);
  return {pass, fmt("errors %.3f, %.3f, %.3f for d = 20, 30, 40; %d inversion(s)%s", mean[0],
                    mean[1], mean[2], inversions,
                    inversions ? (within ? " within one pooled SD" : " beyond one pooled SD") : "")};
}

Outcome criterion3() {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 5; ++d) {
    Rng rng(100 + d);
    DenseMatrix a(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      a(j, j) = 0.2 + 0.4 * rng.uniform();
      const std::size_t k = (j + 1) % d;
      if (k != j) a(j, k) = 0.3 * (2 * rng.uniform() - 1);
    }
    const DenseMatrix sigma = stationary_covariance(a, DenseMatrix::identity(d));
    const DenseMatrix lag1 = sigma * a.transpose();
    const LagCovariances cov{0.5, sigma, lag1, lag1.transpose()};
    worst = std::max(worst, max_abs_diff(clime_from_covariances(cov, 1e-8), a));
  }

  const DenseMatrix lag0{{1, 0.5}, {0.5, 1}};
  const std::vector<double> b{0.6, 0.3};
  const double tau = 0.1;
  const LpResult lp = solve_simplex(build_clime_subproblem(lag0, b, b, tau));
  const Vector u = clime_split_to_coefficients(lp.solution);
  double best = std::numeric_limits<double>::infinity(), bu0 = 0, bu1 = 0;
  for (int i = -1000; i <= 1000; ++i)
    for (int j = -1000; j <= 1000; ++j) {
      const double u0 = i * 0.001, u1 = j * 0.001;
      if (std::abs(b[0] - u0 - 0.5 * u1) > tau + 1e-12 || std::abs(b[1] - 0.5 * u0 - u1) > tau + 1e-12)
        continue;
      const double obj = std::abs(u0) + std::abs(u1);
      if (obj < best) {
        best = obj;
        bu0 = u0;
        bu1 = u1;
      }
    }
  const double gap = std::max(std::abs(u[0] - bu0), std::abs(u[1] - bu1));
  return {worst < 1e-6 && gap <= 0.01,
          fmt("exact-covariance recovery max error %.2e (< 1e-6) for d = 2..5; d=2 LP "
              "(%.4f, %.4f) vs lattice (%.3f, %.3f), gap %.4f (<= 0.01)",
              worst, u[0], u[1], bu0, bu1, gap)};
}

Outcome criterion4() {
  const std::size_t d = 20, n = 400, reps = 50;
  const SimulationTruth truth = make_truth(default_pattern(PatternKind::hub, d), d, n, 1);
  const KernelConfig kernel{KernelType::epanechnikov, default_bandwidth(n)};
  // tau at the stochastic rate sqrt(log d / (n b_n)) with unit constant.
  const double tau = std::sqrt(std::log(static_cast<double>(d)) / (n * kernel.bandwidth));
  std::vector<SeriesMatrix> xs;
  for (std::size_t r = 0; r < reps; ++r)
    xs.push_back(simulate_tvvar(truth.path, truth.psi, kDefaultBurnIn, replicate_seed(kStudySeed, r)));
  const PartialRecovery pr = partial_recovery_check(xs, truth.path, truth.psi, tau, kernel);

  const auto inv = inverse_cov_l1_path(truth.path, truth.psi);
  const Window w = interior_window(n, kernel.bandwidth);
  std::size_t strong = 0;
  for (std::size_t i = w.first; i <= w.last; ++i)
    strong += threshold_support(truth.path.at(i), 2 * theoretical_threshold(inv[i - 1], tau)).count();
  const double bound = 1.0 - 2.0 / d - 0.1;
  return {pr.no_false_positive >= bound && pr.strong_recovered >= bound,
          fmt("tau %.3f; P(S_hat in S) %.3f, P(strong in S_hat) %.3f, both >= %.2f; "
              "%.2f strong signals per time point; %zu failed cells",
              tau, pr.no_false_positive, pr.strong_recovered, bound,
              static_cast<double>(strong) / static_cast<double>(w.size()), pr.failures)};
}

// TPR of a curve at the given FPR by linear interpolation between its
// points, ordered by FPR.
double tpr_at(std::vector<RocPoint> curve, double fpr) {
  std::sort(curve.begin(), curve.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
  });
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const RocPoint& lo = curve[k];
    const RocPoint& hi = curve[k + 1];
    if (fpr < lo.fpr || fpr > hi.fpr) continue;
    if (hi.fpr == lo.fpr) return std::max(lo.tpr, hi.tpr);
    return lo.tpr + (hi.tpr - lo.tpr) * (fpr - lo.fpr) / (hi.fpr - lo.fpr);
  }
  return curve.back().tpr;
}

Outcome criterion5() {
  const std::size_t d = 20, n = 100, reps = 10;
  const KernelConfig kernel{KernelType::epanechnikov, default_bandwidth(n)};
  const std::vector<double> grid = linear_grid(0.001, 0.45, 30);
  std::map<PatternKind, std::vector<RocPoint>> curves;
  for (PatternKind kind : {PatternKind::hub, PatternKind::band}) {
    const SimulationTruth truth = make_truth(default_pattern(kind, d), d, n, 1);
    std::vector<SeriesMatrix> xs;
    for (std::size_t r = 0; r < reps; ++r)
      xs.push_back(simulate_tvvar(truth.path, truth.psi, kDefaultBurnIn, replicate_seed(kStudySeed, r)));
    const auto roc = roc_curve(xs, truth.path, truth.psi, grid, ThresholdPolicy::fixed_numeric, kernel);
    // Points without estimates and the all-zero corner carry no comparison.
    for (const auto& p : roc)
      if (p.cells > 0 && (p.fpr > 0.0 || p.tpr > 0.0)) curves[kind].push_back(p);
    std::printf("  %s:", to_string(kind));
    for (const auto& p : curves[kind]) std::printf(" (%.3f,%.3f)", p.fpr, p.tpr);
    std::printf("\n");
  }
  const auto& hub = curves[PatternKind::hub];
  const auto& band = curves[PatternKind::band];
  if (hub.empty() || band.empty()) return {false, "no informative ROC points"};
  double lo = 1.0, hi = 0.0;
  for (const auto& p : band) {
    lo = std::min(lo, p.fpr);
    hi = std::max(hi, p.fpr);
  }
  int compared = 0, wins = 0;
  for (const auto& p : hub) {
    if (p.fpr < lo || p.fpr > hi) continue;
    ++compared;
    if (tpr_at(band, p.fpr) > p.tpr) ++wins;
  }
  const double frac = compared ? static_cast<double>(wins) / compared : 0.0;
  return {compared > 0 && frac >= 0.7,
          fmt("band TPR above hub TPR at %d of %d matched-FPR points (%.0f%%, need >= 70%%)", wins,
              compared, 100.0 * frac)};
}

Outcome criterion6(const std::vector<std::string>& suites) {
  if (suites.empty()) return {false, "no property suites given"};
  std::string failed;
  for (const auto& path : suites) {
    const std::string cmd = "'" + path + "' > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!(WIFEXITED(status) && WEXITSTATUS(status) == 0)) {
      const auto slash = path.find_last_of('/');
      failed += " " + path.substr(slash == std::string::npos ? 0 : slash + 1);
    }
  }
  return {failed.empty(), failed.empty() ? fmt("%zu suites green", suites.size())
                                         : "failing suites:" + failed};
}

// Thirty variables in fifteen rotating pairs with a regime shift: the
// rotation angle of every pair advances by pi across a short logistic
// transition late in the sample, so the recent dynamics differ from the
// long-run average a stationary fit sees.
SeriesMatrix regime_shift_series(std::uint64_t seed) {
  const std::size_t d = 30, n = 1258, pairs = d / 2;
  const double radius = 0.99, center = 950.0, width = 5.0, noise = 0.1;
  std::vector<DenseMatrix> mats;
  for (std::size_t i = 1; i <= n; ++i) {
    const double shift = 1.0 / (1.0 + std::exp(-(static_cast<double>(i) - center) / width));
    DenseMatrix a(d, d);
    for (std::size_t k = 0; k < pairs; ++k) {
      const double th = 0.3 + 0.4 * static_cast<double>(k) / pairs + std::numbers::pi * shift;
      a(2 * k, 2 * k) = radius * std::cos(th);
      a(2 * k, 2 * k + 1) = -radius * std::sin(th);
      a(2 * k + 1, 2 * k) = radius * std::sin(th);
      a(2 * k + 1, 2 * k + 1) = radius * std::cos(th);
    }
    mats.push_back(std::move(a));
  }
  const TransitionPath path{n, d, std::move(mats)};
  return preprocess(simulate_tvvar(path, DenseMatrix::identity(d) * (noise * noise), kDefaultBurnIn, seed));
}

Outcome criterion7() {
  const std::vector<double> grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  const double window = 0.3;
  const std::size_t span = 100;
  double tv_total = 0.0, st_total = 0.0;
  const std::vector<std::uint64_t> seeds{11, 12, 13};
  for (std::uint64_t seed : seeds) {
    const SeriesMatrix x = regime_shift_series(seed);
    const std::size_t n1 = x.n() - span;
    double err[2];
    int k = 0;
    for (Method m : {Method::tvvar_clime, Method::stationary_clime}) {
      EstimatorConfig cfg;
      cfg.method = m;
      cfg.kernel.bandwidth = window;
      err[k++] = tune_by_prediction(x, cfg, grid, n1, window).selected_error;
    }
    std::printf("  seed %llu: TV-VAR %.3f, stationary %.3f, ratio %.2f\n",
                static_cast<unsigned long long>(seed), err[0], err[1], err[1] / err[0]);
    tv_total += err[0];
    st_total += err[1];
  }
  const double ratio = st_total / tv_total;
  return {ratio > 1.5, fmt("mean one-step error TV-VAR %.3f vs stationary %.3f over %zu series: "
                           "ratio %.2f (target 2, tolerance > 1.5)%s",
                           tv_total / seeds.size(), st_total / seeds.size(), seeds.size(), ratio,
                           ratio >= 2.0 ? "" : "; below the 2x target")};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string only;
  std::vector<std::string> suites;
  if (!args.empty()) {
    only = args[0];
    suites.assign(args.begin() + 1, args.end());
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"c1", criterion1},
      {"c2", criterion2},
      {"c3", criterion3},
      {"c4", criterion4},
      {"c5", criterion5},
      {"c6", [&] { return criterion6(suites); }},
      {"c7", criterion7},
  };
  int failures = 0;
  bool matched = false;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && only != "all" && name != only) continue;
    matched = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.0fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
