#include "tvvar/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvvar {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Partition {0..d-1} into g contiguous groups of size d/g; the first group
// also takes the remainder.
std::vector<std::vector<std::size_t>> partition_groups(std::size_t d, std::size_t g) {
  const std::size_t base = d / g;
  const std::size_t extra = d % g;
  std::vector<std::vector<std::size_t>> groups(g);
  std::size_t next = 0;
  for (std::size_t k = 0; k < g; ++k) {
    const std::size_t size = base + (k == 0 ? extra : 0);
    for (std::size_t i = 0; i < size; ++i) groups[k].push_back(next++);
  }
  return groups;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next() {
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open_zero() { return 1.0 - uniform(); }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

const char* to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::hub: return "hub";
    case PatternKind::cluster: return "cluster";
    case PatternKind::band: return "band";
    case PatternKind::random: return "random";
  }
  return "unknown";
}

PatternKind pattern_kind_from_string(const std::string& name) {
  for (auto k : {PatternKind::hub, PatternKind::cluster, PatternKind::band, PatternKind::random}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown pattern: " + name);
}

void GraphPattern::validate(std::size_t d) const {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(off_diag > 0.0) || !std::isfinite(off_diag))
    throw std::invalid_argument("off-diagonal magnitude must be positive");
  if (!(diag > 0.0) || !std::isfinite(diag))
    throw std::invalid_argument("diagonal value must be positive");
  switch (kind) {
    case PatternKind::hub:
    case PatternKind::cluster:
      if (groups < 1 || groups > d)
        throw std::invalid_argument("group count must lie in [1, d]");
      break;
    case PatternKind::band:
      if (groups < 1 || groups >= d) throw std::invalid_argument("band width must lie in [1, d)");
      break;
    case PatternKind::random:
      if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("edge probability must lie in [0, 1]");
      break;
  }
}

GraphPattern default_pattern(PatternKind kind, std::size_t d) {
  GraphPattern p;
  p.kind = kind;
  p.off_diag = 0.001;
  p.diag = 10.0;
  switch (kind) {
    case PatternKind::hub:
    case PatternKind::cluster:
      if (d == 20) p.groups = 8;
      else if (d == 30) p.groups = 10;
      else if (d == 40) p.groups = 15;
      else if (d == 50) p.groups = 20;
      else p.groups = std::max<std::size_t>(1, (2 * d) / 5);
      break;
    case PatternKind::band:
      p.groups = 1;
      break;
    case PatternKind::random:
      p.groups = 1;
      p.prob = 0.001;
      break;
  }
  return p;
}

DenseMatrix generate_baseline(const GraphPattern& pattern, std::size_t d, std::uint64_t seed) {
  pattern.validate(d);
  Rng rng(seed);
  DenseMatrix a(d, d);
  auto add_edge = [&](std::size_t i, std::size_t j) {
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    a(i, j) = sign * pattern.off_diag;
    a(j, i) = sign * pattern.off_diag;
  };
  switch (pattern.kind) {
    case PatternKind::hub:
      for (const auto& group : partition_groups(d, pattern.groups))
        for (std::size_t k = 1; k < group.size(); ++k) add_edge(group[0], group[k]);
      break;
    case PatternKind::cluster:
      for (const auto& group : partition_groups(d, pattern.groups))
        for (std::size_t x = 0; x < group.size(); ++x)
          for (std::size_t y = x + 1; y < group.size(); ++y) add_edge(group[x], group[y]);
      break;
    case PatternKind::band:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d && j <= i + pattern.groups; ++j) add_edge(i, j);
      break;
    case PatternKind::random:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          if (rng.bernoulli(pattern.prob)) add_edge(i, j);
      break;
  }
  for (std::size_t i = 0; i < d; ++i) a(i, i) = pattern.diag;
  return a;
}

DenseMatrix normalize_spectral(const DenseMatrix& m, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target spectral norm must be positive");
  const double rho = spectral_norm(m);
  if (rho == 0.0) throw std::invalid_argument("cannot normalize the zero matrix");
  return m * (target / rho);
}

TransitionPath interpolate_path(const DenseMatrix& a01, const DenseMatrix& a02, std::size_t n) {
  if (!a01.is_square() || a01.rows() != a02.rows() || a01.cols() != a02.cols())
    throw DimensionError("baseline matrices must be square and of equal shape");
  if (n < 2) throw std::invalid_argument("path length must be at least 2");
  TransitionPath path;
  path.n = n;
  path.d = a01.rows();
  path.matrices.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    const double w1 = std::pow(1.0 - t, 4);
    const double w2 = t * t;
    path.matrices.push_back(a01 * w1 + a02 * w2);
  }
  return path;
}

DenseMatrix innovation_cov(const DenseMatrix& a01, const DenseMatrix& sigma) {
  if (!a01.is_square() || !sigma.is_square() || a01.rows() != sigma.rows())
    throw DimensionError("innovation covariance needs square matrices of equal size");
  DenseMatrix psi = sigma - a01 * sigma * a01.transpose();
  const double lo = min_eigenvalue_symmetric(psi);
  if (lo < -kPsdTolerance)
    throw NotPsdError("innovation covariance is not PSD (min eigenvalue " + std::to_string(lo) +
                      ")");
  return psi;
}

SeriesMatrix::SeriesMatrix(DenseMatrix values) : values_(std::move(values)) {
  require_finite(values_, "series");
}

void SeriesMatrix::set_column(std::size_t time, std::span<const double> x) {
  if (x.size() != d()) throw DimensionError("column length mismatch");
  for (std::size_t j = 0; j < d(); ++j) values_(j, time - 1) = x[j];
}

SeriesMatrix SeriesMatrix::slice(std::size_t first, std::size_t last) const {
  if (first < 1 || last > n() || first > last) throw std::out_of_range("bad series slice");
  SeriesMatrix out(d(), last - first + 1);
  for (std::size_t j = 0; j < d(); ++j)
    for (std::size_t i = first; i <= last; ++i) out(j, i - first + 1) = (*this)(j, i);
  return out;
}

namespace {

SeriesMatrix run_recursion(const TransitionPath& path, const DenseMatrix& chol, Vector x,
                           Rng& rng) {
  const std::size_t d = path.d;
  SeriesMatrix out(d, path.n);
  Vector z(d);
  for (std::size_t i = 1; i <= path.n; ++i) {
    for (auto& v : z) v = rng.normal();
    Vector next = path.at(i) * x;
    const Vector e = chol * z;
    for (std::size_t j = 0; j < d; ++j) next[j] += e[j];
    x = std::move(next);
    out.set_column(i, x);
  }
  require_finite(out.values(), "simulated series");
  return out;
}

void check_path(const TransitionPath& path, const DenseMatrix& psi) {
  if (path.matrices.size() != path.n || path.n == 0) throw DimensionError("malformed path");
  for (const auto& a : path.matrices)
    if (a.rows() != path.d || a.cols() != path.d) throw DimensionError("path matrix shape");
  if (psi.rows() != path.d || psi.cols() != path.d) throw DimensionError("Psi shape");
}

}  // namespace

SeriesMatrix simulate_tvvar(const TransitionPath& path, const DenseMatrix& psi,
                            std::size_t burn_in, std::uint64_t seed) {
  check_path(path, psi);
  if (burn_in < kMinBurnIn) throw std::invalid_argument("burn-in must be at least 50 steps");
  const DenseMatrix chol = cholesky_psd(psi);
  Rng rng(seed);
  Vector x(path.d, 0.0);
  Vector z(path.d);
  for (std::size_t s = 0; s < burn_in; ++s) {
    for (auto& v : z) v = rng.normal();
    Vector next = path.at(1) * x;
    const Vector e = chol * z;
    for (std::size_t j = 0; j < path.d; ++j) next[j] += e[j];
    x = std::move(next);
  }
  return run_recursion(path, chol, std::move(x), rng);
}

SeriesMatrix simulate_tvvar_from(const TransitionPath& path, const DenseMatrix& psi,
                                 std::span<const double> x0, std::uint64_t seed) {
  check_path(path, psi);
  if (x0.size() != path.d) throw DimensionError("x0 length mismatch");
  const DenseMatrix chol = cholesky_psd(psi);
  Rng rng(seed);
  return run_recursion(path, chol, Vector(x0.begin(), x0.end()), rng);
}

DenseMatrix stationary_covariance(const DenseMatrix& a, const DenseMatrix& psi) {
  if (!a.is_square() || psi.rows() != a.rows() || psi.cols() != a.cols())
    throw DimensionError("stationary covariance shape mismatch");
  // Sigma = sum_k A^k Psi (A^k)^T, summed by doubling.
  DenseMatrix sigma = psi;
  DenseMatrix power = a;
  for (int iter = 0; iter < 64; ++iter) {
    DenseMatrix next = sigma + power * sigma * power.transpose();
    const double change = max_abs_diff(next, sigma);
    sigma = std::move(next);
    power = power * power;
    if (change <= 1e-15 * std::max(1.0, norm(sigma, NormKind::entry_max))) break;
    if (norm(power, NormKind::entry_max) > 1e150)
      throw NumericalError("transition matrix is not contractive");
  }
  return symmetrize(sigma);
}

std::vector<DenseMatrix> covariance_path(const TransitionPath& path, const DenseMatrix& psi) {
  check_path(path, psi);
  std::vector<DenseMatrix> out;
  out.reserve(path.n + 1);
  out.push_back(stationary_covariance(path.at(1), psi));
  for (std::size_t i = 1; i <= path.n; ++i) {
    const DenseMatrix& a = path.at(i);
    out.push_back(symmetrize(a * out.back() * a.transpose() + psi));
  }
  return out;
}

SimulationTruth make_truth(const GraphPattern& pattern, std::size_t d, std::size_t n,
                           std::uint64_t seed) {
  pattern.validate(d);
  // Independent streams for the two baselines.
  const DenseMatrix raw1 = generate_baseline(pattern, d, seed * 2 + 1);
  const DenseMatrix raw2 = generate_baseline(pattern, d, seed * 2 + 2);
  SimulationTruth truth{pattern,
                        seed,
                        normalize_spectral(raw1, kBaselineNormStart),
                        normalize_spectral(raw2, kBaselineNormEnd),
                        {},
                        DenseMatrix(d, d)};
  truth.path = interpolate_path(truth.a01, truth.a02, n);
  truth.psi = innovation_cov(truth.a01, DenseMatrix::identity(d));
  return truth;
}

void SpatialDesignParams::validate() const {
  if (d < 2) throw std::invalid_argument("spatial design needs d >= 2");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("distance exponent r must lie in (0,1)");
  if (!(gamma > 1.0)) throw std::invalid_argument("decay exponent gamma must exceed 1");
}

DenseMatrix spatial_design_matrix(const SpatialDesignParams& p) {
  p.validate();
  const double dd = static_cast<double>(p.d);
  const double scale = std::pow(dd, p.r);
  DenseMatrix a(p.d, p.d);
  for (std::size_t m = 0; m < p.d; ++m) {
    for (std::size_t k = 0; k < p.d; ++k) {
      // |m-k| / d^r < d^(1-r) / 2 is 2 |m-k| < d, compared exactly.
      const std::size_t gap = m > k ? m - k : k - m;
      if (2 * gap >= p.d) continue;
      const double dist = static_cast<double>(gap) / scale;
      a(m, k) = std::pow(1.0 + dist * dist, -p.gamma);
    }
  }
  return a;
}

SparsityMeasures sparsity_measures(const DenseMatrix& a, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0,1)");
  SparsityMeasures out;
  Vector col_sums(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double v = std::abs(a(r, c));
      // |x|^0 counts nonzeros.
      const double term = v == 0.0 ? 0.0 : (alpha == 0.0 ? 1.0 : std::pow(v, alpha));
      row_sum += term;
      col_sums[c] += term;
    }
    out.s = std::max(out.s, row_sum);
  }
  for (double c : col_sums) out.s = std::max(out.s, c);
  out.m_d = std::max(max_abs_row_sum(a), max_abs_col_sum(a));
  return out;
}

double weak_signal_fraction(const DenseMatrix& a, double u) {
  std::size_t weak = 0, nonzero = 0;
  for (double v : a.entries()) {
    const double x = std::abs(v);
    if (x > 0.0) {
      ++nonzero;
      if (x < u) ++weak;
    }
  }
  return nonzero == 0 ? 0.0 : static_cast<double>(weak) / static_cast<double>(nonzero);
}

bool in_sparsity_class(const DenseMatrix& a, double alpha, double s, double m_d) {
  const SparsityMeasures m = sparsity_measures(a, alpha);
  return m.s <= s && m.m_d <= m_d;
}

bool in_weak_signal_class(const DenseMatrix& a, double alpha, double s, double m_d, double beta,
                          double l_d, std::span<const double> u_values) {
  if (!in_sparsity_class(a, alpha, s, m_d)) return false;
  for (double u : u_values) {
    if (weak_signal_fraction(a, u) > l_d * std::pow(u, beta)) return false;
  }
  return true;
}

DenseMatrix companion_form(std::span<const DenseMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("companion form needs at least one block");
  const std::size_t d = blocks[0].rows();
  for (const auto& b : blocks)
    if (b.rows() != d || b.cols() != d) throw DimensionError("companion blocks must be d x d");
  const std::size_t k = blocks.size();
  DenseMatrix out(k * d, k * d);
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, b * d + j) = blocks[b](i, j);
  for (std::size_t b = 1; b < k; ++b)
    for (std::size_t i = 0; i < d; ++i) out(b * d + i, (b - 1) * d + i) = 1.0;
  return out;
}

}  // namespace tvvar
