#include "tvvar/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tvvar {

void KernelConfig::validate() const {
  // The flat kernel may span the whole sample so that every weight is equal.
  if (kernel == KernelType::flat ? !(bandwidth > 0.0 && std::isfinite(bandwidth))
                                 : !(bandwidth > 0.0 && bandwidth < 1.0))
    throw std::invalid_argument("bandwidth must lie in (0, 1)");
}

double default_bandwidth(std::size_t n) {
  return 0.8 * std::pow(static_cast<double>(n), -0.2);
}

double epanechnikov(double v) { return std::abs(v) <= 1.0 ? 0.75 * (1.0 - v * v) : 0.0; }

double kernel_value(KernelType kernel, double v) {
  switch (kernel) {
    case KernelType::epanechnikov: return epanechnikov(v);
    case KernelType::flat: return std::abs(v) <= 1.0 ? 0.5 : 0.0;
  }
  return 0.0;
}

Vector nw_weights(double t, std::size_t n, const KernelConfig& cfg) {
  cfg.validate();
  if (n == 0) throw std::invalid_argument("weights need n >= 1");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("evaluation time must lie in (0, 1]");
  Vector w(n, 0.0);
  double total = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t m = 1; m <= n; ++m) {
    const double k = kernel_value(cfg.kernel, (t - static_cast<double>(m) / nn) / cfg.bandwidth);
    w[m - 1] = k;
    total += k;
  }
  if (!(total > 0.0))
    throw EmptyWindowError("no grid point within bandwidth of t = " + std::to_string(t));
  for (double& v : w) v /= total;
  return w;
}

namespace {

DenseMatrix weighted_moment(const SeriesMatrix& x, const Vector& base, int lag) {
  const std::size_t n = x.n();
  const std::size_t d = x.d();
  Vector w = base;
  if (lag == 1) w[n - 1] = 0.0;
  if (lag == -1) w[0] = 0.0;
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0))
    throw EmptyWindowError("kernel window holds no complete lag pair");
  for (double& v : w) v /= total;

  const DenseMatrix& vals = x.values();
  DenseMatrix out(d, d);
  for (std::size_t m = 0; m < n; ++m) {
    const double wm = w[m];
    if (wm == 0.0) continue;
    const std::size_t partner = static_cast<std::size_t>(static_cast<long>(m) + lag);
    for (std::size_t j = 0; j < d; ++j) {
      const double xj = wm * vals(j, m);
      if (lag == 0) {
        for (std::size_t k = j; k < d; ++k) out(j, k) += xj * vals(k, m);
      } else {
        for (std::size_t k = 0; k < d; ++k) out(j, k) += xj * vals(k, partner);
      }
    }
  }
  if (lag == 0) {
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < j; ++k) out(j, k) = out(k, j);
  }
  return out;
}

void check_lag(int lag) {
  if (lag < -1 || lag > 1) throw std::invalid_argument("lag must be -1, 0 or 1");
}

void check_time(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("evaluation time must lie in (0, 1]");
}

}  // namespace

SmoothedCov smoothed_cov(const SeriesMatrix& x, double t, int lag, const KernelConfig& cfg) {
  check_lag(lag);
  check_time(t);
  if (x.n() < 2) throw std::invalid_argument("series needs at least two columns");
  const Vector w = nw_weights(t, x.n(), cfg);
  return {t, lag, weighted_moment(x, w, lag)};
}

LagCovariances smoothed_covariances(const SeriesMatrix& x, double t, const KernelConfig& cfg) {
  check_time(t);
  if (x.n() < 2) throw std::invalid_argument("series needs at least two columns");
  const Vector w = nw_weights(t, x.n(), cfg);
  return {t, weighted_moment(x, w, 0), weighted_moment(x, w, 1), weighted_moment(x, w, -1)};
}

LagCovariances sample_covariances(const SeriesMatrix& x) {
  const std::size_t n = x.n();
  if (n < 2) throw std::invalid_argument("series needs at least two columns");
  const std::size_t d = x.d();
  const DenseMatrix& vals = x.values();
  DenseMatrix s0(d, d), s1(d, d);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    for (std::size_t j = 0; j < d; ++j) {
      const double xj = vals(j, m);
      for (std::size_t k = j; k < d; ++k) s0(j, k) += xj * vals(k, m);
      for (std::size_t k = 0; k < d; ++k) s1(j, k) += xj * vals(k, m + 1);
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < j; ++k) s0(j, k) = s0(k, j);
  const double scale = 1.0 / static_cast<double>(n - 1);
  s0 *= scale;
  s1 *= scale;
  DenseMatrix sm1 = s1.transpose();
  return {0.5, std::move(s0), std::move(s1), std::move(sm1)};
}

}  // namespace tvvar
