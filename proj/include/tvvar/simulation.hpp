#ifndef TVVAR_SIMULATION_HPP_
#define TVVAR_SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvvar/linalg.hpp"

namespace tvvar {

// Seeded generator with a portable uniform and a Box-Muller normal, so that
// draws do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_zero();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_[4];
  std::optional<double> spare_;
  std::uint64_t next();
};

enum class PatternKind { hub, cluster, band, random };

const char* to_string(PatternKind kind);
PatternKind pattern_kind_from_string(const std::string& name);

// Parameters of the baseline sparsity generator. `groups` is the number of
// hubs or clusters (band width for band); `prob` is the edge probability of
// the random pattern; `off_diag` and `diag` are the off-diagonal magnitude and
// the diagonal value.
struct GraphPattern {
  PatternKind kind = PatternKind::hub;
  std::size_t groups = 1;
  double prob = 0.0;
  double off_diag = 0.001;
  double diag = 10.0;

  // Throws std::invalid_argument if the parameters do not fit `kind` or d.
  void validate(std::size_t d) const;
};

// Generator defaults for a dimension: hub and cluster take the group counts
// of the reference setup (8/10/15/... for d = 20/30/40/...), band uses one
// off-diagonal, random uses prob = 0.001; v = 0.001, u = 10 throughout.
GraphPattern default_pattern(PatternKind kind, std::size_t d);

// Symmetric d x d matrix whose support follows the pattern; off-diagonal
// nonzeros are +/- off_diag with fair-coin signs and the diagonal is `diag`.
DenseMatrix generate_baseline(const GraphPattern& pattern, std::size_t d, std::uint64_t seed);

// M * (target / rho(M)).
DenseMatrix normalize_spectral(const DenseMatrix& m, double target);

struct TransitionPath {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<DenseMatrix> matrices;  // matrices[i - 1] = A_i

  double time(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n); }
  const DenseMatrix& at(std::size_t i) const { return matrices.at(i - 1); }
};

// A_i = (1 - i/n)^4 A01 + (i/n)^2 A02, i = 1..n.
TransitionPath interpolate_path(const DenseMatrix& a01, const DenseMatrix& a02, std::size_t n);

inline constexpr double kPsdTolerance = 1e-10;

class NotPsdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Psi = Sigma - A01 Sigma A01^T, checked PSD to -1e-10.
DenseMatrix innovation_cov(const DenseMatrix& a01, const DenseMatrix& sigma);

// d x n observations, one column per time point.
class SeriesMatrix {
 public:
  explicit SeriesMatrix(DenseMatrix values);
  SeriesMatrix(std::size_t d, std::size_t n) : values_(d, n) {}

  std::size_t d() const { return values_.rows(); }
  std::size_t n() const { return values_.cols(); }

  // 1-based time index.
  double operator()(std::size_t var, std::size_t time) const { return values_(var, time - 1); }
  double& operator()(std::size_t var, std::size_t time) { return values_(var, time - 1); }
  Vector column(std::size_t time) const { return values_.column(time - 1); }
  void set_column(std::size_t time, std::span<const double> x);

  // Columns first..last (1-based, inclusive) as a new series.
  SeriesMatrix slice(std::size_t first, std::size_t last) const;

  const DenseMatrix& values() const { return values_; }

 private:
  DenseMatrix values_;
};

inline constexpr std::size_t kDefaultBurnIn = 100;
inline constexpr std::size_t kMinBurnIn = 50;

// x_i = A_i x_{i-1} + e_i with e_i ~ N(0, Psi) through the Cholesky factor of
// Psi; x_0 comes from `burn_in` steps under A_1 started at zero.
SeriesMatrix simulate_tvvar(const TransitionPath& path, const DenseMatrix& psi,
                            std::size_t burn_in, std::uint64_t seed);

// Same recursion from an explicit x_0.
SeriesMatrix simulate_tvvar_from(const TransitionPath& path, const DenseMatrix& psi,
                                 std::span<const double> x0, std::uint64_t seed);

// Exact lag-zero covariance of the stationary VAR(1) with matrix A and
// innovation covariance Psi (doubling iteration on the Lyapunov equation).
DenseMatrix stationary_covariance(const DenseMatrix& a, const DenseMatrix& psi);

// Marginal covariances Sigma_{i,0}, i = 0..n, of the simulated process:
// Sigma_0 is the stationary covariance under A_1 and
// Sigma_i = A_i Sigma_{i-1} A_i^T + Psi.
std::vector<DenseMatrix> covariance_path(const TransitionPath& path, const DenseMatrix& psi);

// Full simulation setup: the two baselines, their normalization to spectral
// norms 0.2 and 1, the interpolated path and the innovation covariance.
struct SimulationTruth {
  GraphPattern pattern;
  std::uint64_t seed = 0;
  DenseMatrix a01;
  DenseMatrix a02;
  TransitionPath path;
  DenseMatrix psi;
};

inline constexpr double kBaselineNormStart = 0.2;
inline constexpr double kBaselineNormEnd = 1.0;

SimulationTruth make_truth(const GraphPattern& pattern, std::size_t d, std::size_t n,
                           std::uint64_t seed);

struct SpatialDesignParams {
  std::size_t d = 0;
  double r = 0.5;
  double gamma = 2.0;

  void validate() const;
};

// A_mk = (1 + ((m-k)/d^r)^2)^(-gamma) for |m-k| / d^r < d^(1-r)/2, else 0.
DenseMatrix spatial_design_matrix(const SpatialDesignParams& p);

// Row and column sparsity measures of the approximate-sparsity class:
// s = max over rows and columns of sum |a|^alpha, and the larger of the two
// operator sums.
struct SparsityMeasures {
  double s = 0.0;
  double m_d = 0.0;
};

SparsityMeasures sparsity_measures(const DenseMatrix& a, double alpha);

// Fraction of the support with magnitudes in (0, u).
double weak_signal_fraction(const DenseMatrix& a, double u);

// True when the matrix satisfies the class bounds for (alpha, s, M_d).
bool in_sparsity_class(const DenseMatrix& a, double alpha, double s, double m_d);

// Additionally checks the weak-signal bound fraction(u) <= L_d u^beta on the
// given u values in (0, u0).
bool in_weak_signal_class(const DenseMatrix& a, double alpha, double s, double m_d, double beta,
                          double l_d, std::span<const double> u_values);

// The (kd) x (kd) VAR(1) matrix of a VAR(k): blocks in the first block row,
// identities on the block sub-diagonal.
DenseMatrix companion_form(std::span<const DenseMatrix> blocks);

}  // namespace tvvar

#endif  // TVVAR_SIMULATION_HPP_
