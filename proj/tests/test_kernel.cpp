#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "tvvar/kernel.hpp"

using namespace tvvar;

TEST_CASE("epanechnikov values") {
  CHECK(epanechnikov(0.0) == 0.75);
  CHECK(epanechnikov(1.0) == 0.0);
  CHECK(epanechnikov(-1.0) == 0.0);
  CHECK(epanechnikov(0.5) == doctest::Approx(0.5625));
  CHECK(epanechnikov(1.5) == 0.0);
  CHECK(kernel_value(KernelType::flat, 0.9) == 0.5);
  CHECK(kernel_value(KernelType::flat, 1.1) == 0.0);
}

TEST_CASE("default bandwidth") {
  CHECK(default_bandwidth(100) == doctest::Approx(0.8 * std::pow(100.0, -0.2)));
  CHECK(default_bandwidth(400) < default_bandwidth(100));
}

TEST_CASE("nadaraya-watson weights at t=0.5, n=4, b=0.3") {
  KernelConfig cfg{KernelType::epanechnikov, 0.3};
  const Vector w = nw_weights(0.5, 4, cfg);
  const double side = 0.75 * (1.0 - (0.25 / 0.3) * (0.25 / 0.3));
  CHECK(side == doctest::Approx(0.2292).epsilon(1e-3));
  const double total = 0.75 + 2 * side;
  CHECK(w[0] == doctest::Approx(side / total));
  CHECK(w[1] == doctest::Approx(0.75 / total));
  CHECK(w[2] == doctest::Approx(side / total));
  CHECK(w[3] == 0.0);
  CHECK(w[0] == doctest::Approx(0.1897).epsilon(1e-3));
  CHECK(w[1] == doctest::Approx(0.6207).epsilon(1e-3));
}

TEST_CASE("a window covering a single grid point puts all weight there") {
  KernelConfig cfg{KernelType::epanechnikov, 0.05};
  const Vector w = nw_weights(0.5, 10, cfg);
  for (std::size_t m = 0; m < 10; ++m) CHECK(w[m] == (m == 4 ? 1.0 : 0.0));
}

TEST_CASE("empty windows and invalid configs fail loudly") {
  KernelConfig narrow{KernelType::epanechnikov, 0.01};
  CHECK_THROWS_AS(nw_weights(0.55, 10, narrow), EmptyWindowError);
  CHECK_THROWS_AS((KernelConfig{KernelType::epanechnikov, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((KernelConfig{KernelType::epanechnikov, -1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(nw_weights(1.5, 10, KernelConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(nw_weights(0.0, 10, KernelConfig{}), std::invalid_argument);
}

TEST_CASE("property: weights form a probability vector") {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 400);
    const double b = 0.05 + 0.4 * rng.uniform();
    const double t = b + (1.0 - 2 * b) * rng.uniform();
    const Vector w = nw_weights(t, n, KernelConfig{KernelType::epanechnikov, b});
    double sum = 0.0;
    for (double v : w) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("smoothed covariance of trivial series") {
  const SeriesMatrix zero(3, 20);
  for (int lag : {-1, 0, 1})
    CHECK(norm(smoothed_cov(zero, 0.5, lag, KernelConfig{}).matrix, NormKind::entry_max) == 0.0);

  SeriesMatrix constant(2, 20);
  for (std::size_t i = 1; i <= 20; ++i) {
    constant(0, i) = 1.5;
    constant(1, i) = -2.0;
  }
  const SmoothedCov c = smoothed_cov(constant, 0.5, 0, KernelConfig{});
  CHECK(c.lag == 0);
  CHECK(c.t == 0.5);
  CHECK(c.matrix(0, 0) == doctest::Approx(2.25));
  CHECK(c.matrix(0, 1) == doctest::Approx(-3.0));
  CHECK(c.matrix(1, 1) == doctest::Approx(4.0));
  CHECK_THROWS_AS(smoothed_cov(constant, 0.5, 2, KernelConfig{}), std::invalid_argument);
}

TEST_CASE("uniform weights give the plain mean of squares") {
  SeriesMatrix x(DenseMatrix{{1, 2, 3}});
  const SmoothedCov c = smoothed_cov(x, 2.0 / 3.0, 0, KernelConfig{KernelType::flat, 5.0});
  CHECK(c.matrix(0, 0) == doctest::Approx(14.0 / 3.0));
}

TEST_CASE("lag one drops the last partner and renormalizes") {
  SeriesMatrix x(DenseMatrix{{1, 2, 3}});
  const KernelConfig flat{KernelType::flat, 5.0};
  // Pairs (1,2) and (2,3) with equal weight.
  CHECK(smoothed_cov(x, 2.0 / 3.0, 1, flat).matrix(0, 0) == doctest::Approx(4.0));
  CHECK(smoothed_cov(x, 2.0 / 3.0, -1, flat).matrix(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("flat kernel reproduces the sample moments") {
  const DenseMatrix a{{0.4, 0.1, 0}, {0, 0.3, -0.2}, {0.1, 0, 0.5}};
  const SeriesMatrix x = tvvar::testing::stationary_series(a, 60, 3);
  const KernelConfig flat{KernelType::flat, 10.0};
  const LagCovariances s = smoothed_covariances(x, 0.5, flat);
  const SeriesMatrix head = x.slice(1, x.n() - 1);
  DenseMatrix lag0(3, 3), lag1(3, 3);
  for (std::size_t i = 1; i <= x.n(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        lag0(j, k) += x(j, i) * x(k, i) / static_cast<double>(x.n());
        if (i < x.n()) lag1(j, k) += x(j, i) * x(k, i + 1) / static_cast<double>(x.n() - 1);
      }
  CHECK(max_abs_diff(s.lag0, lag0) < 1e-12);
  CHECK(max_abs_diff(s.lag1, lag1) < 1e-12);
  CHECK(max_abs_diff(s.lag_minus1, lag1.transpose()) < 1e-12);

  const LagCovariances sample = sample_covariances(x);
  DenseMatrix head0(3, 3);
  for (std::size_t i = 1; i <= head.n(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        head0(j, k) += head(j, i) * head(k, i) / static_cast<double>(head.n());
  CHECK(max_abs_diff(sample.lag0, head0) < 1e-12);
  CHECK(max_abs_diff(sample.lag1, lag1) < 1e-12);
}

TEST_CASE("property: smoothed lag-zero covariance is symmetric PSD") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 8);
    const std::size_t n = 30 + static_cast<std::size_t>(rng.uniform() * 200);
    const DenseMatrix a = tvvar::testing::random_matrix(rng, d, d, 0.3 / static_cast<double>(d));
    const SeriesMatrix x = tvvar::testing::stationary_series(a, n, 100 + trial);
    const double b = 0.1 + 0.3 * rng.uniform();
    const double t = b + (1 - 2 * b) * rng.uniform();
    const DenseMatrix c = smoothed_cov(x, t, 0, KernelConfig{KernelType::epanechnikov, b}).matrix;
    CHECK(c == c.transpose());
    CHECK(min_eigenvalue_symmetric(c) >= -1e-10);
  }
}

TEST_CASE("smoothed Yule-Walker residual is small on a long stationary series") {
  const DenseMatrix a{{0.5, 0.2, 0}, {0, 0.4, 0.1}, {-0.1, 0, 0.3}};
  int good = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const SeriesMatrix x = tvvar::testing::stationary_series(a, 2000, 500 + seed);
    const LagCovariances c = smoothed_covariances(x, 0.5, KernelConfig{KernelType::epanechnikov, 0.2});
    if (norm(c.lag1 - c.lag0 * a.transpose(), NormKind::entry_max) < 0.15) ++good;
  }
  CHECK(good >= 18);
}
