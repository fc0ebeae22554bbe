#include "tvvar/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvvar/lp.hpp"
#include "tvvar/parallel.hpp"

namespace tvvar {

const char* to_string(Method method) {
  switch (method) {
    case Method::tvvar_clime: return "tvvar_clime";
    case Method::stationary_clime: return "stationary_clime";
    case Method::tv_lasso: return "tv_lasso";
    case Method::tv_ridge: return "tv_ridge";
    case Method::tv_mle: return "tv_mle";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (auto m : {Method::tvvar_clime, Method::stationary_clime, Method::tv_lasso,
                 Method::tv_ridge, Method::tv_mle}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method: " + name);
}

bool uses_regularizer(Method method) { return method != Method::tv_mle; }

void EstimatorConfig::validate() const {
  if (!(regularizer >= 0.0) || !std::isfinite(regularizer))
    throw std::invalid_argument("regularizer must be a nonnegative number");
  if ((method == Method::tvvar_clime || method == Method::stationary_clime) &&
      !(regularizer > 0.0))
    throw std::invalid_argument("tau must be positive");
  if (method == Method::tv_ridge && !(regularizer > 0.0))
    throw std::invalid_argument("ridge lambda must be positive");
  if (method != Method::stationary_clime) kernel.validate();
  if (fista_max_iters == 0) throw std::invalid_argument("fista_max_iters must be positive");
  if (!(fista_tol > 0.0)) throw std::invalid_argument("fista_tol must be positive");
}

InfeasibleSubproblemError::InfeasibleSubproblemError(std::size_t row, double t)
    : NumericalError("infeasible sub-problem for row " + std::to_string(row) + " at t = " +
                     std::to_string(t) + " (tau too small)"),
      row_(row),
      t_(t) {}

DenseMatrix clime_from_covariances(const LagCovariances& cov, double tau, std::size_t workers) {
  const std::size_t d = cov.lag0.rows();
  if (!cov.lag0.is_square() || cov.lag1.rows() != d || cov.lag1.cols() != d ||
      cov.lag_minus1.rows() != d || cov.lag_minus1.cols() != d)
    throw DimensionError("covariance shapes disagree");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  DenseMatrix estimate(d, d);
  parallel_for(
      d,
      [&](std::size_t j) {
        const Vector col = cov.lag1.column(j);
        const auto row = cov.lag_minus1.row(j);
        const StandardFormLP lp = build_clime_subproblem(cov.lag0, col, row, tau);
        const LpResult res = solve_simplex(lp);
        if (res.status == LpStatus::infeasible) throw InfeasibleSubproblemError(j, cov.t);
        if (res.status != LpStatus::optimal)
          throw NumericalError("CLIME sub-problem reported " + std::string(to_string(res.status)));
        const Vector u = clime_split_to_coefficients(res.solution);
        for (std::size_t k = 0; k < d; ++k) estimate(j, k) = u[k];
      },
      workers);
  return estimate;
}

DenseMatrix estimate_tvvar_clime(const SeriesMatrix& x, double t, double tau,
                                 const KernelConfig& cfg, std::size_t workers) {
  return clime_from_covariances(smoothed_covariances(x, t, cfg), tau, workers);
}

DenseMatrix estimate_stationary_clime(const SeriesMatrix& x, double tau, std::size_t workers) {
  return clime_from_covariances(sample_covariances(x), tau, workers);
}

namespace {

double soft_threshold(double v, double k) {
  if (v > k) return v - k;
  if (v < -k) return v + k;
  return 0.0;
}

}  // namespace

double lasso_objective(const DenseMatrix& gram, std::span<const double> target, double lambda,
                       std::span<const double> beta) {
  const Vector gb = gram * beta;
  double quad = 0.0, lin = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    quad += beta[i] * gb[i];
    lin += beta[i] * target[i];
    l1 += std::abs(beta[i]);
  }
  return quad - 2.0 * lin + lambda * l1;
}

Vector fista_lasso_row(const DenseMatrix& gram, std::span<const double> target, double lambda,
                       std::size_t max_iters, double tol, FistaReport* report,
                       std::vector<double>* trace) {
  const std::size_t d = gram.rows();
  if (!gram.is_square() || target.size() != d) throw DimensionError("lasso shapes disagree");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  Vector x(d, 0.0);
  const double lip = 2.0 * spectral_norm(gram);
  if (lip == 0.0) return x;
  const double step = 1.0 / lip;

  Vector y = x, prev = x;
  double momentum = 1.0;
  double obj = lasso_objective(gram, target, lambda, x);
  if (trace) trace->push_back(obj);
  double change = 0.0;
  bool converged = false;
  std::size_t iter = 0;
  for (; iter < max_iters; ++iter) {
    const Vector gy = gram * y;
    Vector next(d);
    for (std::size_t i = 0; i < d; ++i)
      next[i] = soft_threshold(y[i] - step * 2.0 * (gy[i] - target[i]), step * lambda);
    const double next_obj = lasso_objective(gram, target, lambda, next);
    if (next_obj > obj && momentum > 1.0) {
      // Restart: drop the momentum and take a plain proximal step from x.
      momentum = 1.0;
      y = x;
      continue;
    }
    change = 0.0;
    for (std::size_t i = 0; i < d; ++i) change = std::max(change, std::abs(next[i] - x[i]));
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / next_momentum;
    prev = x;
    x = std::move(next);
    obj = next_obj;
    if (trace) trace->push_back(obj);
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + beta * (x[i] - prev[i]);
    momentum = next_momentum;
    if (change < tol) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (report) {
    report->converged = report->converged && converged;
    report->max_iterations_used = std::max(report->max_iterations_used, iter);
    report->final_change = std::max(report->final_change, change);
  }
  return x;
}

DenseMatrix lasso_from_covariances(const LagCovariances& cov, double lambda,
                                   std::size_t max_iters, double tol, FistaReport* report) {
  const std::size_t d = cov.lag0.rows();
  DenseMatrix estimate(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const Vector target = cov.lag1.column(j);
    const Vector beta = fista_lasso_row(cov.lag0, target, lambda, max_iters, tol, report);
    for (std::size_t k = 0; k < d; ++k) estimate(j, k) = beta[k];
  }
  return estimate;
}

DenseMatrix estimate_tv_lasso(const SeriesMatrix& x, double t, double lambda,
                              const KernelConfig& cfg, std::size_t max_iters, double tol,
                              FistaReport* report) {
  return lasso_from_covariances(smoothed_covariances(x, t, cfg), lambda, max_iters, tol, report);
}

DenseMatrix ridge_from_covariances(const LagCovariances& cov, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ridge lambda must be positive");
  DenseMatrix lhs = cov.lag0;
  for (std::size_t i = 0; i < lhs.rows(); ++i) lhs(i, i) += lambda;
  return solve(lhs, cov.lag1).transpose();
}

DenseMatrix estimate_tv_ridge(const SeriesMatrix& x, double t, double lambda,
                              const KernelConfig& cfg) {
  return ridge_from_covariances(smoothed_covariances(x, t, cfg), lambda);
}

DenseMatrix mle_from_covariances(const LagCovariances& cov) {
  return solve(cov.lag0, cov.lag1).transpose();
}

DenseMatrix estimate_tv_mle(const SeriesMatrix& x, double t, const KernelConfig& cfg) {
  return mle_from_covariances(smoothed_covariances(x, t, cfg));
}

DenseMatrix estimate_at(const SeriesMatrix& x, double t, const EstimatorConfig& cfg,
                        std::size_t workers) {
  cfg.validate();
  switch (cfg.method) {
    case Method::tvvar_clime:
      return estimate_tvvar_clime(x, t, cfg.regularizer, cfg.kernel, workers);
    case Method::stationary_clime:
      return estimate_stationary_clime(x, cfg.regularizer, workers);
    case Method::tv_lasso:
      return estimate_tv_lasso(x, t, cfg.regularizer, cfg.kernel, cfg.fista_max_iters,
                               cfg.fista_tol);
    case Method::tv_ridge:
      return estimate_tv_ridge(x, t, cfg.regularizer, cfg.kernel);
    case Method::tv_mle:
      return estimate_tv_mle(x, t, cfg.kernel);
  }
  throw std::invalid_argument("unknown method");
}

EstimatePath estimate_path(const SeriesMatrix& x, const std::vector<double>& times,
                           const EstimatorConfig& cfg, std::size_t workers) {
  cfg.validate();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("estimation times must be strictly increasing");
    if (cfg.method != Method::stationary_clime) {
      const double b = cfg.kernel.bandwidth;
      if (times[i] < b - 1e-12 || times[i] > 1.0 - b + 1e-12)
        throw std::invalid_argument("estimation time outside [b_n, 1 - b_n]");
    }
  }
  EstimatePath out;
  out.config = cfg;
  const std::size_t count = times.size();
  std::vector<std::optional<DenseMatrix>> slots(count);
  std::vector<std::string> errors(count);

  if (cfg.method == Method::stationary_clime) {
    try {
      const DenseMatrix a = estimate_stationary_clime(x, cfg.regularizer, workers);
      for (auto& s : slots) s = a;
    } catch (const NumericalError& e) {
      for (auto& msg : errors) msg = e.what();
    }
  } else {
    parallel_for(
        count,
        [&](std::size_t i) {
          try {
            slots[i] = estimate_at(x, times[i], cfg, 1);
          } catch (const NumericalError& e) {
            errors[i] = e.what();
          }
        },
        workers);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (slots[i]) {
      out.times.push_back(times[i]);
      out.matrices.push_back(std::move(*slots[i]));
    } else {
      out.failures.push_back({times[i], errors[i]});
    }
  }
  return out;
}

}  // namespace tvvar
