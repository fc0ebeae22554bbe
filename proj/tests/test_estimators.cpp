#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tvvar/estimators.hpp"
#include "tvvar/evaluation.hpp"

using namespace tvvar;
using tvvar::testing::random_matrix;
using tvvar::testing::stationary_series;

namespace {

// Exact lag moments of a stationary VAR(1): lag1 = Sigma A^T.
LagCovariances exact_moments(const DenseMatrix& a, const DenseMatrix& psi) {
  const DenseMatrix sigma = stationary_covariance(a, psi);
  const DenseMatrix lag1 = sigma * a.transpose();
  return LagCovariances{0.5, sigma, lag1, lag1.transpose()};
}

LagCovariances orthogonal_moments(const DenseMatrix& lag1) {
  return LagCovariances{0.5, DenseMatrix::identity(lag1.rows()), lag1, lag1.transpose()};
}

// Plain cyclic coordinate descent for the same lasso objective.
Vector coordinate_descent_lasso(const DenseMatrix& g, std::span<const double> b, double lambda) {
  const std::size_t d = b.size();
  Vector beta(d, 0.0);
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double change = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double rho = b[k];
      for (std::size_t q = 0; q < d; ++q)
        if (q != k) rho -= g(k, q) * beta[q];
      const double z = std::abs(rho) > lambda / 2 ? (rho - std::copysign(lambda / 2, rho)) / g(k, k) : 0.0;
      change = std::max(change, std::abs(z - beta[k]));
      beta[k] = z;
    }
    if (change < 1e-14) break;
  }
  return beta;
}

const DenseMatrix kSparseA{{0.5, 0.0, 0.2, 0.0}, {0.0, -0.3, 0.0, 0.0}, {0.1, 0.0, 0.4, 0.0}, {0.0, 0.25, 0.0, 0.2}};

}  // namespace

TEST_CASE("method names") {
  for (auto m : {Method::tvvar_clime, Method::stationary_clime, Method::tv_lasso, Method::tv_ridge,
                 Method::tv_mle})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("glasso"), std::invalid_argument);
  CHECK_FALSE(uses_regularizer(Method::tv_mle));
  CHECK(uses_regularizer(Method::tv_ridge));
  EstimatorConfig cfg;
  cfg.regularizer = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.method = Method::tv_mle;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("exact covariances recover the transition matrix") {
  for (std::size_t d = 2; d <= 5; ++d) {
    Rng rng(40 + d);
    DenseMatrix a(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      a(j, j) = 0.3 + 0.3 * rng.uniform();
      if (j + 1 < d) a(j, j + 1) = 0.2 * (2 * rng.uniform() - 1);
    }
    const LagCovariances cov = exact_moments(a, DenseMatrix::identity(d));
    CHECK(max_abs_diff(clime_from_covariances(cov, 1e-8), a) < 1e-6);
    CHECK(max_abs_diff(mle_from_covariances(cov), a) < 1e-10);
  }
}

TEST_CASE("clime on a long stationary series is close to the generator") {
  const DenseMatrix a = DenseMatrix::identity(3) * 0.5;
  const KernelConfig kernel{KernelType::epanechnikov, default_bandwidth(2000)};
  int good = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const SeriesMatrix x = stationary_series(a, 2000, 300 + seed, std::sqrt(2.0));
    if (max_abs_diff(estimate_tvvar_clime(x, 0.5, 0.2, kernel), a) < 0.15) ++good;
  }
  CHECK(good >= 18);
}

TEST_CASE("a huge tau gives the zero estimate") {
  const SeriesMatrix x = stationary_series(kSparseA, 200, 5);
  const KernelConfig kernel{};
  CHECK(norm(estimate_tvvar_clime(x, 0.5, 1e6, kernel), NormKind::entry_max) == 0.0);
  CHECK(norm(estimate_stationary_clime(x, 1e6), NormKind::entry_max) == 0.0);
}

TEST_CASE("stationary clime on sample moments") {
  const SeriesMatrix x = stationary_series(kSparseA, 3000, 8);
  const DenseMatrix est = estimate_stationary_clime(x, 0.02);
  CHECK(max_abs_diff(est, kSparseA) < 0.1);
  const LagCovariances s = sample_covariances(x);
  CHECK(est == clime_from_covariances(s, 0.02));
}

TEST_CASE("property: clime residual contract, sub-problem independence and tau monotonicity") {
  const SimulationTruth truth = make_truth(default_pattern(PatternKind::hub, 10), 10, 150, 3);
  const SeriesMatrix x = simulate_tvvar(truth.path, truth.psi, 100, 12);
  const KernelConfig kernel{KernelType::epanechnikov, default_bandwidth(150)};
  for (double t : {0.3, 0.5, 0.7}) {
    const LagCovariances cov = smoothed_covariances(x, t, kernel);
    double previous_l1 = std::numeric_limits<double>::infinity();
    bool feasible_seen = false;
    for (double tau : {0.01, 0.03, 0.05, 0.1, 0.2, 0.4}) {
      DenseMatrix serial(10, 10);
      try {
        serial = clime_from_covariances(cov, tau, 1);
      } catch (const InfeasibleSubproblemError&) {
        // Once some tau is feasible every larger one is too.
        CHECK_FALSE(feasible_seen);
        continue;
      }
      feasible_seen = true;
      const DenseMatrix threaded = clime_from_covariances(cov, tau, 4);
      CHECK(serial == threaded);
      CHECK(norm(cov.lag1 - cov.lag0 * serial.transpose(), NormKind::entry_max) <= tau + 1e-8);
      CHECK(norm(cov.lag_minus1 - serial * cov.lag0, NormKind::entry_max) <= tau + 1e-8);
      const double l1 = norm(serial, NormKind::entry_l1);
      CHECK(l1 <= previous_l1 + 1e-9);
      previous_l1 = l1;
    }
    CHECK(feasible_seen);
  }
}

TEST_CASE("infeasible sub-problems raise a structured error") {
  const DenseMatrix singular{{1, 1}, {1, 1}};
  const DenseMatrix lag1{{1, 0}, {-1, 0}};
  const LagCovariances cov{0.4, singular, lag1, lag1.transpose()};
  try {
    clime_from_covariances(cov, 1e-6);
    FAIL("expected an infeasible sub-problem");
  } catch (const InfeasibleSubproblemError& e) {
    CHECK(e.row() == 0);
    CHECK(e.time() == 0.4);
  }
}

TEST_CASE("lasso on an orthogonal design") {
  const DenseMatrix lag1{{0.4, -0.1}, {0.2, 0.3}};
  const LagCovariances cov = orthogonal_moments(lag1);
  const DenseMatrix free = lasso_from_covariances(cov, 0.0, 5000, 1e-12);
  CHECK(max_abs_diff(free, lag1.transpose()) < 1e-9);
  const double kill = 2 * norm(lag1, NormKind::entry_max);
  CHECK(norm(lasso_from_covariances(cov, kill, 5000, 1e-12), NormKind::entry_max) == 0.0);
  // Soft thresholding at lambda / 2.
  const DenseMatrix soft = lasso_from_covariances(cov, 0.4, 5000, 1e-12);
  CHECK(soft(0, 0) == doctest::Approx(0.2));
  CHECK(soft(0, 1) == 0.0);
  CHECK(soft(1, 0) == 0.0);
  CHECK(soft(1, 1) == doctest::Approx(0.1));
}

TEST_CASE("FISTA matches coordinate descent on small problems") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix g = random_matrix(rng, 3, 3);
    g = g * g.transpose() + DenseMatrix::identity(3) * 0.1;
    Vector b(3);
    for (double& v : b) v = 2 * rng.uniform() - 1;
    const double lambda = rng.uniform();
    FistaReport report;
    const Vector fista = fista_lasso_row(g, b, lambda, 100000, 1e-12, &report);
    const Vector cd = coordinate_descent_lasso(g, b, lambda);
    CHECK(report.converged);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(fista[k] - cd[k]) < 1e-4);
  }
}

TEST_CASE("property: FISTA objective never rises and ends below the zero start") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 15);
    DenseMatrix g = random_matrix(rng, d, d);
    g = g * g.transpose() * (1.0 / static_cast<double>(d)) + DenseMatrix::identity(d) * 0.05;
    Vector b(d);
    for (double& v : b) v = 2 * rng.uniform() - 1;
    std::vector<double> trace;
    const Vector beta = fista_lasso_row(g, b, 0.05 + rng.uniform(), 3000, 1e-10, nullptr, &trace);
    REQUIRE(!trace.empty());
    for (std::size_t k = 1; k < trace.size(); ++k)
      CHECK(trace[k] <= trace[k - 1] + 1e-12 * (1 + std::abs(trace[k - 1])));
    CHECK(trace.back() <= 0.0);
    CHECK(lasso_objective(g, b, 0.05, Vector(d, 0.0)) == 0.0);
    CHECK(beta.size() == d);
  }
}

TEST_CASE("ridge shrinkage and its small-lambda limit") {
  const DenseMatrix lag1{{0.4, -0.1}, {0.2, 0.3}};
  const LagCovariances cov = orthogonal_moments(lag1);
  CHECK(max_abs_diff(ridge_from_covariances(cov, 1.0), lag1.transpose() * 0.5) < 1e-15);
  const double small = norm(ridge_from_covariances(cov, 10.0), NormKind::entry_max);
  const double smaller = norm(ridge_from_covariances(cov, 100.0), NormKind::entry_max);
  CHECK(smaller < small);
  CHECK(small < norm(ridge_from_covariances(cov, 1.0), NormKind::entry_max));
  CHECK_THROWS_AS(ridge_from_covariances(cov, 0.0), std::invalid_argument);

  const SeriesMatrix x = stationary_series(kSparseA, 300, 2);
  const KernelConfig kernel{KernelType::epanechnikov, default_bandwidth(300)};
  for (double t : {0.3, 0.5, 0.7})
    CHECK(max_abs_diff(estimate_tv_ridge(x, t, 1e-8, kernel), estimate_tv_mle(x, t, kernel)) < 1e-5);
}

TEST_CASE("estimate_at dispatches on the method") {
  const SeriesMatrix x = stationary_series(kSparseA, 200, 4);
  EstimatorConfig cfg;
  cfg.kernel.bandwidth = default_bandwidth(200);
  cfg.regularizer = 0.05;
  cfg.method = Method::tv_ridge;
  CHECK(estimate_at(x, 0.5, cfg) == estimate_tv_ridge(x, 0.5, 0.05, cfg.kernel));
  cfg.method = Method::tv_mle;
  CHECK(estimate_at(x, 0.5, cfg) == estimate_tv_mle(x, 0.5, cfg.kernel));
  cfg.method = Method::stationary_clime;
  CHECK(estimate_at(x, 0.5, cfg) == estimate_stationary_clime(x, 0.05));
  cfg.method = Method::tvvar_clime;
  CHECK(estimate_at(x, 0.5, cfg) == estimate_tvvar_clime(x, 0.5, 0.05, cfg.kernel));
  cfg.method = Method::tv_lasso;
  CHECK(estimate_at(x, 0.5, cfg) ==
        estimate_tv_lasso(x, 0.5, 0.05, cfg.kernel, cfg.fista_max_iters, cfg.fista_tol));
}

TEST_CASE("estimate_path over the interior window") {
  const SeriesMatrix x = stationary_series(kSparseA, 100, 4);
  EstimatorConfig cfg;
  cfg.kernel.bandwidth = 0.3;
  cfg.regularizer = 0.1;
  const auto times = window_times(100, 0.3);
  const EstimatePath serial = estimate_path(x, times, cfg, 1);
  const EstimatePath threaded = estimate_path(x, times, cfg, 3);
  CHECK(serial.times == times);
  CHECK(serial.failures.empty());
  REQUIRE(serial.matrices.size() == threaded.matrices.size());
  for (std::size_t k = 0; k < serial.matrices.size(); ++k) CHECK(serial.matrices[k] == threaded.matrices[k]);

  CHECK_THROWS_AS(estimate_path(x, {0.5, 0.4}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(estimate_path(x, {0.1}, cfg), std::invalid_argument);

  // A tau too small for sampling noise on a short, rank-deficient window.
  SeriesMatrix wide(DenseMatrix(6, 12));
  Rng rng(1);
  for (std::size_t i = 1; i <= 12; ++i)
    for (std::size_t j = 0; j < 6; ++j) wide(j, i) = rng.normal();
  cfg.regularizer = 1e-9;
  const EstimatePath partial = estimate_path(wide, window_times(12, 0.3), cfg, 1);
  CHECK(partial.times.size() + partial.failures.size() == window_times(12, 0.3).size());
}
