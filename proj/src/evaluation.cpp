#include "tvvar/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tvvar/kernel.hpp"
#include "tvvar/parallel.hpp"

namespace tvvar {

Window interior_window(std::size_t n, double bandwidth) {
  if (!(bandwidth > 0.0 && bandwidth < 0.5)) throw std::invalid_argument("bandwidth must lie in (0, 0.5)");
  const double nd = static_cast<double>(n);
  Window w;
  w.first = static_cast<std::size_t>(std::floor(nd * bandwidth)) + 1;
  const double upper = std::floor(nd * (1.0 - bandwidth)) - 1.0;
  w.last = upper < 1.0 ? 0 : static_cast<std::size_t>(upper);
  if (w.size() == 0) throw std::invalid_argument("interior window is empty");
  return w;
}

std::vector<double> window_times(std::size_t n, double bandwidth) {
  const Window w = interior_window(n, bandwidth);
  std::vector<double> times;
  for (std::size_t i = w.first; i <= w.last; ++i)
    times.push_back(static_cast<double>(i) / static_cast<double>(n));
  return times;
}

std::size_t grid_index(double t, std::size_t n) {
  const double scaled = t * static_cast<double>(n);
  const double r = std::round(scaled);
  if (std::abs(scaled - r) > 1e-9 || r < 1.0 || r > static_cast<double>(n))
    throw std::invalid_argument("time " + std::to_string(t) + " is not on the grid i/n");
  return static_cast<std::size_t>(r);
}

std::vector<double> estimation_errors(const EstimatePath& est, const TransitionPath& truth,
                                      std::span<const NormKind> norms) {
  if (est.times.empty()) throw NumericalError("no estimated time points to score");
  std::vector<double> sums(norms.size(), 0.0);
  for (std::size_t p = 0; p < est.times.size(); ++p) {
    const DenseMatrix diff = est.matrices[p] - truth.at(grid_index(est.times[p], truth.n));
    for (std::size_t k = 0; k < norms.size(); ++k) sums[k] += norm(diff, norms[k]);
  }
  for (double& s : sums) s /= static_cast<double>(est.times.size());
  return sums;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void ErrorTable::add(const std::string& method, std::span<const NormKind> norms,
                     const std::vector<std::vector<double>>& per_replicate) {
  for (std::size_t k = 0; k < norms.size(); ++k) {
    std::vector<double> column;
    for (const auto& rep : per_replicate) column.push_back(rep.at(k));
    rows.push_back({method, norms[k], mean_of(column), sample_sd(column), column.size()});
  }
}

const ErrorSummary& ErrorTable::find(const std::string& method, NormKind norm) const {
  for (const auto& r : rows)
    if (r.method == method && r.norm == norm) return r;
  throw std::out_of_range("no error row for " + method + " / " + to_string(norm));
}

double theoretical_threshold(double cov0_inv_l1, double tau) {
  if (!(cov0_inv_l1 >= 0.0) || !(tau >= 0.0))
    throw std::invalid_argument("threshold inputs must be nonnegative");
  return 2.0 * tau * cov0_inv_l1;
}

PatternRates pattern_metrics(const SupportMask& estimated, const SupportMask& truth) {
  if (estimated.rows != truth.rows || estimated.cols != truth.cols)
    throw DimensionError("support masks differ in shape");
  std::size_t zeros = 0, nonzeros = 0, false_pos = 0, false_neg = 0;
  for (std::size_t i = 0; i < truth.bits.size(); ++i) {
    if (truth.bits[i]) {
      ++nonzeros;
      if (!estimated.bits[i]) ++false_neg;
    } else {
      ++zeros;
      if (estimated.bits[i]) ++false_pos;
    }
  }
  PatternRates r;
  r.fpr = zeros == 0 ? 0.0 : static_cast<double>(false_pos) / static_cast<double>(zeros);
  r.fnr = nonzeros == 0 ? 0.0 : static_cast<double>(false_neg) / static_cast<double>(nonzeros);
  return r;
}

const char* to_string(ThresholdPolicy policy) {
  return policy == ThresholdPolicy::fixed_numeric ? "fixed" : "theoretical";
}

ThresholdPolicy threshold_policy_from_string(const std::string& name) {
  if (name == "fixed") return ThresholdPolicy::fixed_numeric;
  if (name == "theoretical") return ThresholdPolicy::theoretical;
  throw std::invalid_argument("unknown threshold policy: " + name);
}

std::vector<double> inverse_cov_l1_path(const TransitionPath& path, const DenseMatrix& psi) {
  const std::vector<DenseMatrix> cov = covariance_path(path, psi);
  std::vector<double> out(path.n);
  for (std::size_t i = 1; i <= path.n; ++i) out[i - 1] = max_abs_col_sum(invert(cov[i - 1]));
  return out;
}

namespace {

// Shared driver for the ROC sweep and the recovery check: fits CLIME at every
// interior point of every replicate for one tau and hands each result on.
template <class Visit>
std::size_t for_each_window_fit(const std::vector<SeriesMatrix>& replicates, std::size_t n,
                                double tau, const KernelConfig& kernel, std::size_t workers,
                                Visit&& visit) {
  const std::vector<double> times = window_times(n, kernel.bandwidth);
  const std::size_t cells = replicates.size() * times.size();
  std::vector<std::optional<DenseMatrix>> fits(cells);
  parallel_for(
      cells,
      [&](std::size_t c) {
        const std::size_t r = c / times.size(), p = c % times.size();
        try {
          fits[c] = estimate_tvvar_clime(replicates[r], times[p], tau, kernel, 1);
        } catch (const NumericalError&) {
        }
      },
      workers);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!fits[c]) {
      ++failures;
      continue;
    }
    visit(grid_index(times[c % times.size()], n), *fits[c]);
  }
  return failures;
}

void check_replicates(const std::vector<SeriesMatrix>& replicates, const TransitionPath& truth) {
  if (replicates.empty()) throw std::invalid_argument("no replicates");
  for (const auto& x : replicates)
    if (x.n() != truth.n || x.d() != truth.d)
      throw DimensionError("replicate shape differs from the truth path");
}

}  // namespace

std::vector<RocPoint> roc_curve(const std::vector<SeriesMatrix>& replicates,
                                const TransitionPath& truth, const DenseMatrix& psi,
                                std::span<const double> tau_grid, ThresholdPolicy policy,
                                const KernelConfig& kernel, std::size_t workers) {
  if (tau_grid.empty()) throw std::invalid_argument("tau grid is empty");
  check_replicates(replicates, truth);
  std::vector<double> inv_l1;
  if (policy == ThresholdPolicy::theoretical) inv_l1 = inverse_cov_l1_path(truth, psi);
  std::vector<RocPoint> curve;
  for (double tau : tau_grid) {
    RocPoint pt;
    pt.tau = tau;
    double fpr = 0.0, tpr = 0.0;
    pt.failures = for_each_window_fit(
        replicates, truth.n, tau, kernel, workers, [&](std::size_t i, const DenseMatrix& a) {
          const double u = policy == ThresholdPolicy::fixed_numeric
                               ? kNumericZero
                               : theoretical_threshold(inv_l1[i - 1], tau);
          const PatternRates r = pattern_metrics(threshold_support(a, u), support(truth.at(i)));
          fpr += r.fpr;
          tpr += 1.0 - r.fnr;
          ++pt.cells;
        });
    if (pt.cells > 0) {
      pt.fpr = fpr / static_cast<double>(pt.cells);
      pt.tpr = tpr / static_cast<double>(pt.cells);
    }
    curve.push_back(pt);
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("grid needs at least one value");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k)
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  return g;
}

Vector one_step_predict(const DenseMatrix& a_hat, std::span<const double> x_prev) {
  if (a_hat.cols() != x_prev.size()) throw DimensionError("prediction shapes disagree");
  return a_hat * x_prev;
}

double rolling_prediction_error(const SeriesMatrix& x, std::size_t n1,
                                const EstimatorConfig& cfg, double stationary_fraction,
                                std::size_t workers, std::vector<double>* per_step) {
  if (n1 < 3 || n1 >= x.n()) throw std::invalid_argument("training size must satisfy 3 <= n1 < n");
  if (!(stationary_fraction > 0.0 && stationary_fraction <= 1.0))
    throw std::invalid_argument("stationary fraction must lie in (0, 1]");
  cfg.validate();
  const std::size_t steps = x.n() - n1;
  std::vector<double> errs(steps);
  const std::size_t stationary_len = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(stationary_fraction * static_cast<double>(n1))));
  parallel_for(
      steps,
      [&](std::size_t s) {
        const std::size_t t = n1 + 1 + s;
        const std::size_t first =
            cfg.method == Method::stationary_clime ? t - stationary_len : t - n1;
        const SeriesMatrix train = x.slice(first, t - 1);
        const DenseMatrix a = estimate_at(train, 1.0, cfg, 1);
        const Vector prev = x.column(t - 1);
        const Vector pred = one_step_predict(a, prev);
        const Vector actual = x.column(t);
        double ss = 0.0;
        for (std::size_t k = 0; k < pred.size(); ++k) ss += (actual[k] - pred[k]) * (actual[k] - pred[k]);
        errs[s] = std::sqrt(ss);
      },
      workers);
  if (per_step) *per_step = errs;
  return mean_of(errs);
}

TuningResult tune_by_prediction(const SeriesMatrix& x, EstimatorConfig cfg,
                                std::span<const double> grid, std::size_t n1,
                                double stationary_fraction, std::size_t workers) {
  if (grid.empty()) throw std::invalid_argument("tuning grid is empty");
  TuningResult out;
  out.grid.assign(grid.begin(), grid.end());
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());
  out.mean_error.assign(out.grid.size(), std::numeric_limits<double>::infinity());
  out.failure.assign(out.grid.size(), "");
  std::string last_failure;
  for (std::size_t k = 0; k < out.grid.size(); ++k) {
    cfg.regularizer = out.grid[k];
    try {
      out.mean_error[k] = rolling_prediction_error(x, n1, cfg, stationary_fraction, workers);
    } catch (const NumericalError& e) {
      out.failure[k] = e.what();
      last_failure = e.what();
    }
    // Strict comparison in ascending order keeps the smallest minimizer.
    if (out.mean_error[k] < out.selected_error) {
      out.selected_error = out.mean_error[k];
      out.selected = out.grid[k];
    }
  }
  if (!std::isfinite(out.selected_error))
    throw NumericalError("every tuning candidate failed; last error: " + last_failure);
  return out;
}

SeriesMatrix preprocess(const SeriesMatrix& x) {
  const std::size_t n = x.n(), d = x.d();
  if (n < 3) throw std::invalid_argument("preprocessing needs at least 3 time points");
  DenseMatrix out(d, n);
  // Centered time regressor, so the line fit decouples from the intercept.
  const double tbar = 0.5 * static_cast<double>(n + 1);
  double stt = 0.0;
  for (std::size_t m = 1; m <= n; ++m) stt += (m - tbar) * (m - tbar);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t m = 1; m <= n; ++m) mean += x(j, m);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t m = 1; m <= n; ++m) ss += (x(j, m) - mean) * (x(j, m) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(mean)))
      throw DataError("variable " + std::to_string(j) + " has zero variance");
    Vector z(n);
    for (std::size_t m = 1; m <= n; ++m) z[m - 1] = (x(j, m) - mean) / sd;
    // z has mean zero, so the intercept of the line is zero too.
    double stz = 0.0;
    for (std::size_t m = 1; m <= n; ++m) stz += (m - tbar) * z[m - 1];
    const double slope = stz / stt;
    double rss = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      z[m - 1] -= slope * (m - tbar);
      rss += z[m - 1] * z[m - 1];
    }
    // Back to unit variance so that a second pass changes nothing. A residual
    // that is numerically zero (a pure trend) is left as it is.
    const double rsd = std::sqrt(rss / static_cast<double>(n - 1));
    const double scale = rsd > 1e-10 ? rsd : 1.0;
    for (std::size_t m = 0; m < n; ++m) out(j, m) = z[m] / scale;
  }
  return SeriesMatrix(std::move(out));
}

PartialRecovery partial_recovery_check(const std::vector<SeriesMatrix>& replicates,
                                       const TransitionPath& truth, const DenseMatrix& psi,
                                       double tau, const KernelConfig& kernel,
                                       std::size_t workers) {
  check_replicates(replicates, truth);
  const std::vector<double> inv_l1 = inverse_cov_l1_path(truth, psi);
  PartialRecovery out;
  std::size_t subset = 0, strong = 0;
  out.failures = for_each_window_fit(
      replicates, truth.n, tau, kernel, workers, [&](std::size_t i, const DenseMatrix& a) {
        const double u = theoretical_threshold(inv_l1[i - 1], tau);
        const SupportMask est = threshold_support(a, u);
        const SupportMask sup = support(truth.at(i));
        const SupportMask big = threshold_support(truth.at(i), 2.0 * u);
        bool inside = true, covered = true;
        for (std::size_t k = 0; k < est.bits.size(); ++k) {
          if (est.bits[k] && !sup.bits[k]) inside = false;
          if (big.bits[k] && !est.bits[k]) covered = false;
        }
        subset += inside;
        strong += covered;
        ++out.cells;
      });
  if (out.cells > 0) {
    out.no_false_positive = static_cast<double>(subset) / static_cast<double>(out.cells);
    out.strong_recovered = static_cast<double>(strong) / static_cast<double>(out.cells);
  }
  return out;
}


std::uint64_t replicate_seed(std::uint64_t base, std::size_t r) {
  return base * 1000003ULL + 7919ULL * static_cast<std::uint64_t>(r) + 17ULL;
}

StudyResult error_study(const SimulationTruth& truth, std::span<const StudyMethod> methods,
                        std::size_t reps, std::uint64_t seed, std::size_t n1,
                        std::span<const NormKind> norms, std::size_t workers) {
  if (reps == 0) throw std::invalid_argument("need at least one replicate");
  if (methods.empty()) throw std::invalid_argument("no methods to compare");
  const std::size_t n = truth.path.n;
  for (const auto& m : methods) m.cfg.validate();
  KernelConfig tuning_kernel = methods.front().cfg.kernel;
  tuning_kernel.bandwidth = default_bandwidth(n1);

  // errors[method][rep] and selections, filled in parallel over replicates.
  std::vector<std::vector<std::vector<double>>> errors(
      methods.size(), std::vector<std::vector<double>>(reps));
  StudyResult out;
  out.selected.assign(methods.size(), std::vector<double>(reps, 0.0));
  std::vector<std::vector<std::size_t>> failed(methods.size(), std::vector<std::size_t>(reps, 0));

  parallel_for(
      reps,
      [&](std::size_t r) {
        const SeriesMatrix x =
            simulate_tvvar(truth.path, truth.psi, kDefaultBurnIn, replicate_seed(seed, r));
        for (std::size_t k = 0; k < methods.size(); ++k) {
          EstimatorConfig cfg = methods[k].cfg;
          if (!methods[k].grid.empty() && uses_regularizer(cfg.method)) {
            EstimatorConfig tcfg = cfg;
            tcfg.kernel = tuning_kernel;
            cfg.regularizer =
                tune_by_prediction(x, tcfg, methods[k].grid, n1, 1.0, 1).selected;
          }
          out.selected[k][r] = cfg.regularizer;
          const EstimatePath path =
              estimate_path(x, window_times(n, cfg.kernel.bandwidth), cfg, 1);
          failed[k][r] = path.failures.size();
          errors[k][r] = estimation_errors(path, truth.path, norms);
        }
      },
      workers);

  for (std::size_t k = 0; k < methods.size(); ++k) {
    out.table.add(to_string(methods[k].cfg.method), norms, errors[k]);
    out.failed_points.push_back(std::accumulate(failed[k].begin(), failed[k].end(), std::size_t{0}));
  }
  return out;
}

}  // namespace tvvar
