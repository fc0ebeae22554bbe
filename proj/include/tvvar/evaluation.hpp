#ifndef TVVAR_EVALUATION_HPP_
#define TVVAR_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvvar/estimators.hpp"
#include "tvvar/linalg.hpp"
#include "tvvar/simulation.hpp"

namespace tvvar {

// Interior grid indices a..b (1-based, inclusive) with a = floor(n b) + 1 and
// b = floor(n (1 - b)) - 1.
struct Window {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
};

Window interior_window(std::size_t n, double bandwidth);

// t_i = i / n over the interior window.
std::vector<double> window_times(std::size_t n, double bandwidth);

// Grid index i with i / n == t (to 1e-9); throws std::invalid_argument when t
// is off the grid.
std::size_t grid_index(double t, std::size_t n);

// Per-norm average of |A_hat(t) - A_t| over the estimated time points.
std::vector<double> estimation_errors(const EstimatePath& est, const TransitionPath& truth,
                                      std::span<const NormKind> norms);

struct ErrorSummary {
  std::string method;
  NormKind norm = NormKind::op_linf;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation over replicates
  std::size_t replicates = 0;
};

struct ErrorTable {
  std::vector<ErrorSummary> rows;

  // per_replicate[r][k] is replicate r's error under norms[k].
  void add(const std::string& method, std::span<const NormKind> norms,
           const std::vector<std::vector<double>>& per_replicate);
  const ErrorSummary& find(const std::string& method, NormKind norm) const;
};

double mean_of(std::span<const double> v);
double sample_sd(std::span<const double> v);

// u = 2 tau |Sigma^-1|_{l1}, where the caller passes the max column sum of the
// inverse lag-zero covariance.
double theoretical_threshold(double cov0_inv_l1, double tau);

struct PatternRates {
  double fpr = 0.0;
  double fnr = 0.0;
};

// FPR over the true zeros and FNR over the true support, each 0 when its
// denominator set is empty.
PatternRates pattern_metrics(const SupportMask& estimated, const SupportMask& truth);

enum class ThresholdPolicy { fixed_numeric, theoretical };

inline constexpr double kNumericZero = 1e-3;

const char* to_string(ThresholdPolicy policy);
ThresholdPolicy threshold_policy_from_string(const std::string& name);

// Thresholds |Sigma_{i-1,0}^{-1}|_{l1} for the grid i = 1..n of a simulated
// truth (index i - 1).
std::vector<double> inverse_cov_l1_path(const TransitionPath& path, const DenseMatrix& psi);

struct RocPoint {
  double tau = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  std::size_t cells = 0;     // (replicate, time) pairs averaged
  std::size_t failures = 0;  // pairs with no estimate
};

// For every tau: CLIME on each replicate over the interior window, thresholded
// by the policy, FPR and 1 - FNR averaged over window points and replicates.
// Time points whose sub-problems fail are counted in `failures` and left out.
std::vector<RocPoint> roc_curve(const std::vector<SeriesMatrix>& replicates,
                                const TransitionPath& truth, const DenseMatrix& psi,
                                std::span<const double> tau_grid, ThresholdPolicy policy,
                                const KernelConfig& kernel, std::size_t workers = 0);

// The evenly spaced grid lo, ..., hi with `count` values.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

Vector one_step_predict(const DenseMatrix& a_hat, std::span<const double> x_prev);

struct TuningResult {
  std::vector<double> grid;        // ascending
  std::vector<double> mean_error;  // +inf where the candidate failed
  std::vector<std::string> failure;  // empty when the candidate ran
  double selected = 0.0;
  double selected_error = std::numeric_limits<double>::infinity();
};

// Mean one-step error over t = n1+1..n: the estimate for x_t is fitted on the
// n1 points before t and evaluated at the right edge of that window. The
// stationary estimator sees only the last `stationary_fraction` of the window
// (pass the kernel bandwidth to give it the same data the kernel reaches).
double rolling_prediction_error(const SeriesMatrix& x, std::size_t n1,
                                const EstimatorConfig& cfg, double stationary_fraction = 1.0,
                                std::size_t workers = 1, std::vector<double>* per_step = nullptr);

// Rolling one-step error for every grid value; the smallest value attaining
// the minimum wins. Candidates that fail numerically get +inf; if all fail a
// NumericalError is thrown. Grid order does not matter.
TuningResult tune_by_prediction(const SeriesMatrix& x, EstimatorConfig cfg,
                                std::span<const double> grid, std::size_t n1,
                                double stationary_fraction = 1.0, std::size_t workers = 0);

// Per variable: standardize, then subtract the least-squares line in time.
SeriesMatrix preprocess(const SeriesMatrix& x);

struct PartialRecovery {
  double no_false_positive = 0.0;  // frequency of S_hat within S
  double strong_recovered = 0.0;   // frequency of {|A| > 2u} within S_hat
  std::size_t cells = 0;
  std::size_t failures = 0;
};

PartialRecovery partial_recovery_check(const std::vector<SeriesMatrix>& replicates,
                                       const TransitionPath& truth, const DenseMatrix& psi,
                                       double tau, const KernelConfig& kernel,
                                       std::size_t workers = 0);

// Seed of replicate r derived from a base seed; distinct for distinct r.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t r);

// One method of an error study. With a non-empty grid the regularizer is
// tuned per replicate by rolling prediction; otherwise cfg.regularizer is used.
struct StudyMethod {
  EstimatorConfig cfg;
  std::vector<double> grid;
};

struct StudyResult {
  ErrorTable table;
  std::vector<std::vector<double>> selected;  // [method][replicate]
  std::vector<std::size_t> failed_points;     // per method, over all replicates
};

// Simulates `reps` series from the truth, fits every method over the interior
// window of cfg.kernel.bandwidth and averages the errors per replicate.
// Tuning uses windows of n1 points with bandwidth 0.8 n1^(-1/5). Replicates
// fan out over `workers`.
StudyResult error_study(const SimulationTruth& truth, std::span<const StudyMethod> methods,
                        std::size_t reps, std::uint64_t seed, std::size_t n1,
                        std::span<const NormKind> norms, std::size_t workers = 0);

}  // namespace tvvar

#endif  // TVVAR_EVALUATION_HPP_
