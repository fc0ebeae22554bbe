#ifndef TVVAR_ESTIMATORS_HPP_
#define TVVAR_ESTIMATORS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvvar/kernel.hpp"
#include "tvvar/linalg.hpp"
#include "tvvar/simulation.hpp"

namespace tvvar {

enum class Method { tvvar_clime, stationary_clime, tv_lasso, tv_ridge, tv_mle };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

// Whether the method reads `regularizer` at all.
bool uses_regularizer(Method method);

struct EstimatorConfig {
  Method method = Method::tvvar_clime;
  double regularizer = 0.1;  // tau for the CLIME methods, lambda otherwise
  KernelConfig kernel;
  std::size_t fista_max_iters = 5000;
  double fista_tol = 1e-7;

  void validate() const;
};

// A sub-problem had no feasible point: tau is below the sampling noise of the
// covariances at this time point.
class InfeasibleSubproblemError : public NumericalError {
 public:
  InfeasibleSubproblemError(std::size_t row, double t);
  std::size_t row() const { return row_; }
  double time() const { return t_; }

 private:
  std::size_t row_;
  double t_;
};

// Row j of the estimate is the l1-minimal u with
//   |[lag1]_{*j} - lag0 u|_max <= tau  and  |[lag_minus1]_{j*} - u^T lag0|_max <= tau.
// The d sub-problems are independent and run on up to `workers` threads.
DenseMatrix clime_from_covariances(const LagCovariances& cov, double tau, std::size_t workers = 1);

DenseMatrix estimate_tvvar_clime(const SeriesMatrix& x, double t, double tau,
                                 const KernelConfig& cfg, std::size_t workers = 1);

// CLIME on unweighted sample moments; one matrix for every t.
DenseMatrix estimate_stationary_clime(const SeriesMatrix& x, double tau, std::size_t workers = 1);

struct FistaReport {
  bool converged = true;
  std::size_t max_iterations_used = 0;
  double final_change = 0.0;  // largest final iterate change over rows
};

// FISTA for min beta^T gram beta - 2 beta^T target + lambda |beta|_1. When
// `trace` is given it receives the objective of every accepted iterate.
Vector fista_lasso_row(const DenseMatrix& gram, std::span<const double> target, double lambda,
                       std::size_t max_iters, double tol, FistaReport* report = nullptr,
                       std::vector<double>* trace = nullptr);

double lasso_objective(const DenseMatrix& gram, std::span<const double> target, double lambda,
                       std::span<const double> beta);

// Row j minimizes beta^T lag0 beta - 2 beta^T [lag1]_{*j} + lambda |beta|_1,
// the kernel-weighted least-squares loss in covariance form, by FISTA with
// step 1 / (2 rho(lag0)) and a momentum restart whenever the objective rises.
DenseMatrix lasso_from_covariances(const LagCovariances& cov, double lambda,
                                   std::size_t max_iters, double tol,
                                   FistaReport* report = nullptr);

DenseMatrix estimate_tv_lasso(const SeriesMatrix& x, double t, double lambda,
                              const KernelConfig& cfg, std::size_t max_iters, double tol,
                              FistaReport* report = nullptr);

// A^T = (lag0 + lambda I)^-1 lag1.
DenseMatrix ridge_from_covariances(const LagCovariances& cov, double lambda);
DenseMatrix estimate_tv_ridge(const SeriesMatrix& x, double t, double lambda,
                              const KernelConfig& cfg);

// A^T = lag0^-1 lag1.
DenseMatrix mle_from_covariances(const LagCovariances& cov);
DenseMatrix estimate_tv_mle(const SeriesMatrix& x, double t, const KernelConfig& cfg);

// Dispatches on cfg.method at a single time t (ignored by stationary_clime).
DenseMatrix estimate_at(const SeriesMatrix& x, double t, const EstimatorConfig& cfg,
                        std::size_t workers = 1);

struct PathFailure {
  double t = 0.0;
  std::string message;
};

struct EstimatePath {
  std::vector<double> times;
  std::vector<DenseMatrix> matrices;
  EstimatorConfig config;
  std::vector<PathFailure> failures;  // time points with no estimate
};

// Estimates at each time in `times` (strictly increasing, inside
// [b_n, 1 - b_n]). Per-point numerical failures are collected in
// `failures` and the point is omitted; time points fan out over `workers`.
EstimatePath estimate_path(const SeriesMatrix& x, const std::vector<double>& times,
                           const EstimatorConfig& cfg, std::size_t workers = 0);

}  // namespace tvvar

#endif  // TVVAR_ESTIMATORS_HPP_
