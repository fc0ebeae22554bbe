#include "tvvar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tvvar {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (data_.size() != rows * cols) throw DimensionError("entry count does not match shape");
  require_finite(*this);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(*this);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("shape mismatch in matrix product");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("shape mismatch in matrix-vector product");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    out[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return out;
}

void require_finite(const DenseMatrix& m, const char* what) {
  for (double v : m.entries()) {
    if (!std::isfinite(v)) throw NonFiniteError(std::string(what) + " has a non-finite entry");
  }
}

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::entry_l1: return "entry_l1";
    case NormKind::entry_max: return "entry_max";
    case NormKind::frobenius: return "frobenius";
    case NormKind::op_l1: return "op_l1";
    case NormKind::op_linf: return "op_linf";
    case NormKind::spectral: return "spectral";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
  for (auto k : {NormKind::entry_l1, NormKind::entry_max, NormKind::frobenius, NormKind::op_l1,
                 NormKind::op_linf, NormKind::spectral}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown norm kind: " + name);
}

double max_abs_row_sum(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (double v : m.row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double max_abs_col_sum(const DenseMatrix& m) {
  Vector sums(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) sums[c] += std::abs(row[c]);
  }
  return *std::max_element(sums.begin(), sums.end());
}

namespace {

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, run until the
// off-diagonal mass is negligible relative to the whole matrix.
Vector symmetric_eigenvalues(const DenseMatrix& m) {
  DenseMatrix a = symmetrize(m);
  const std::size_t n = a.rows();
  double total = 0.0;
  for (double v : a.entries()) total += v * v;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-32 * total) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  return eig;
}

}  // namespace

double spectral_norm(const DenseMatrix& m) {
  require_finite(m);
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  // Largest eigenvalue of the smaller Gram matrix.
  const DenseMatrix g = m.rows() < m.cols() ? m * m.transpose() : m.transpose() * m;
  const Vector eig = symmetric_eigenvalues(g);
  return std::sqrt(std::max(0.0, *std::max_element(eig.begin(), eig.end())));
}

double norm(const DenseMatrix& m, NormKind kind) {
  require_finite(m);
  switch (kind) {
    case NormKind::entry_l1: {
      double s = 0.0;
      for (double v : m.entries()) s += std::abs(v);
      return s;
    }
    case NormKind::entry_max: {
      double s = 0.0;
      for (double v : m.entries()) s = std::max(s, std::abs(v));
      return s;
    }
    case NormKind::frobenius: {
      double s = 0.0;
      for (double v : m.entries()) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::op_l1: return max_abs_col_sum(m);
    case NormKind::op_linf: return max_abs_row_sum(m);
    case NormKind::spectral: return spectral_norm(m);
  }
  return 0.0;
}

std::size_t SupportMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

SupportMask threshold_support(const DenseMatrix& m, double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
  require_finite(m);
  SupportMask mask(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) mask.set(r, c, std::abs(m(r, c)) > u);
  return mask;
}

SupportMask support(const DenseMatrix& m) {
  SupportMask mask(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) mask.set(r, c, m(r, c) != 0.0);
  return mask;
}

DenseMatrix solve(const DenseMatrix& m, const DenseMatrix& rhs) {
  if (!m.is_square()) throw DimensionError("solve needs a square matrix");
  if (rhs.rows() != m.rows()) throw DimensionError("right-hand side row mismatch");
  require_finite(m);
  require_finite(rhs, "right-hand side");
  const std::size_t n = m.rows();
  const std::size_t k = rhs.cols();
  DenseMatrix a = m;
  DenseMatrix b = rhs;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < kSingularPivot) {
      throw SingularMatrixError("singular matrix: pivot " + std::to_string(col) +
                                " below 1e-12");
    }
    if (piv != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(piv).begin());
      std::swap_ranges(b.row(col).begin(), b.row(col).end(), b.row(piv).begin());
    }
    const double p = a(col, col);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < k; ++c) b(r, c) -= f * b(col, c);
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double p = a(r, r);
    for (std::size_t c = 0; c < k; ++c) b(r, c) /= p;
  }
  return b;
}

DenseMatrix invert(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionError("invert needs a square matrix");
  return solve(m, DenseMatrix::identity(m.rows()));
}

bool verify_norm_product_bounds(const DenseMatrix& a, const DenseMatrix& b,
                                const DenseMatrix& c) {
  if (a.cols() != b.rows() || b.cols() != c.rows())
    throw DimensionError("incompatible shapes for ABC");
  const double lhs = norm(a * b * c, NormKind::entry_max);
  const double slack = 1e-12 * (1.0 + lhs);
  const double a_row = max_abs_row_sum(a), b_row = max_abs_row_sum(b);
  const double b_col = max_abs_col_sum(b), c_col = max_abs_col_sum(c);
  const double a_max = norm(a, NormKind::entry_max), b_max = norm(b, NormKind::entry_max);
  const double c_max = norm(c, NormKind::entry_max);
  return lhs <= a_row * b_max * c_col + slack && lhs <= a_row * b_row * c_max + slack &&
         lhs <= a_max * b_col * c_col + slack;
}

DenseMatrix cholesky_psd(const DenseMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("cholesky needs a square matrix");
  require_finite(m);
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, norm(m, NormKind::entry_max));
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (diag < -tol * scale) {
      throw SingularMatrixError("matrix is not positive semidefinite (pivot " +
                                std::to_string(diag) + ")");
    }
    if (diag <= tol * scale) {
      // Zero pivot: the column is dependent on earlier ones; leave it zero.
      continue;
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

double min_eigenvalue_symmetric(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionError("eigenvalues need a square matrix");
  if (m.rows() == 0) throw DimensionError("eigenvalues of an empty matrix");
  const Vector eig = symmetric_eigenvalues(m);
  return *std::min_element(eig.begin(), eig.end());
}

DenseMatrix symmetrize(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionError("symmetrize needs a square matrix");
  DenseMatrix s = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    best = std::max(best, std::abs(a.entries()[i] - b.entries()[i]));
  return best;
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace tvvar
