#ifndef TVVAR_KERNEL_HPP_
#define TVVAR_KERNEL_HPP_

#include <cstddef>

#include "tvvar/linalg.hpp"
#include "tvvar/simulation.hpp"

namespace tvvar {

// `flat` is constant 1/2 on [-1, 1] and exists for tests that need the
// smoothed estimate to reduce to a plain sample moment; the CLI does not
// accept it.
enum class KernelType { epanechnikov, flat };

struct KernelConfig {
  KernelType kernel = KernelType::epanechnikov;
  double bandwidth = 0.3;

  void validate() const;
};

// Bandwidth 0.8 n^(-1/5).
double default_bandwidth(std::size_t n);

// 0.75 (1 - v^2) on |v| <= 1, zero outside.
double epanechnikov(double v);

double kernel_value(KernelType kernel, double v);

class EmptyWindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Nadaraya-Watson weights w(t, m) over the grid m/n, m = 1..n (index m-1).
Vector nw_weights(double t, std::size_t n, const KernelConfig& cfg);

struct SmoothedCov {
  double t = 0.0;
  int lag = 0;
  DenseMatrix matrix;
};

// sum_m w(t,m) x_m x_{m+lag}^T with lag in {-1, 0, 1}. Terms whose partner
// index falls outside 1..n are dropped and the remaining weights renormalized.
// Any t in (0, 1] with a nonempty kernel window is accepted; estimation grids
// restrict themselves to [b_n, 1 - b_n], rolling prediction evaluates at the
// right edge t = 1.
SmoothedCov smoothed_cov(const SeriesMatrix& x, double t, int lag, const KernelConfig& cfg);

// The three lags an estimator needs at one time point.
struct LagCovariances {
  double t = 0.0;
  DenseMatrix lag0;
  DenseMatrix lag1;
  DenseMatrix lag_minus1;
};

LagCovariances smoothed_covariances(const SeriesMatrix& x, double t, const KernelConfig& cfg);

// Unweighted moments (1/(n-1)) sum x_m x_{m+lag}^T over the n-1 pairs; lag 0
// averages over the n-1 regressor columns x_1..x_{n-1}.
LagCovariances sample_covariances(const SeriesMatrix& x);

}  // namespace tvvar

#endif  // TVVAR_KERNEL_HPP_
