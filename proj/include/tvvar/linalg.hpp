#ifndef TVVAR_LINALG_HPP_
#define TVVAR_LINALG_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvvar/errors.hpp"

namespace tvvar {

using Vector = std::vector<double>;

// Dense real matrix with row-major storage.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  const std::vector<double>& entries() const { return data_; }

  DenseMatrix transpose() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(DenseMatrix a, double s);
DenseMatrix operator*(double s, DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

// Throws NonFiniteError if any entry is NaN or infinite.
void require_finite(const DenseMatrix& m, const char* what = "matrix");

enum class NormKind { entry_l1, entry_max, frobenius, op_l1, op_linf, spectral };

const char* to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

// op_l1 is the maximum absolute column sum, op_linf the maximum absolute row
// sum. The spectral norm is the square root of the top eigenvalue of the Gram
// matrix, found by Jacobi rotations; power iteration stalls on the nearly
// scalar baselines the simulator produces.
double norm(const DenseMatrix& m, NormKind kind);

double spectral_norm(const DenseMatrix& m);
double max_abs_row_sum(const DenseMatrix& m);
double max_abs_col_sum(const DenseMatrix& m);

struct SupportMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<bool> bits;

  SupportMask() = default;
  SupportMask(std::size_t r, std::size_t c, bool fill = false)
      : rows(r), cols(c), bits(r * c, fill) {}

  bool operator()(std::size_t r, std::size_t c) const { return bits[r * cols + c]; }
  void set(std::size_t r, std::size_t c, bool v) { bits[r * cols + c] = v; }
  std::size_t count() const;
  bool operator==(const SupportMask&) const = default;
};

// bit(j,k) = |M_jk| > u, strictly.
SupportMask threshold_support(const DenseMatrix& m, double u);

// Exact nonzero pattern.
SupportMask support(const DenseMatrix& m);

inline constexpr double kSingularPivot = 1e-12;

// Gauss-Jordan inversion with partial pivoting.
DenseMatrix invert(const DenseMatrix& m);

// Solves M X = B by partial-pivot elimination.
DenseMatrix solve(const DenseMatrix& m, const DenseMatrix& rhs);

// Checks |ABC|_max against the three products of row-sum, column-sum and
// entry-max norms. The row-sum norm bounds the left factor and the column-sum
// norm the right factor, so the inequalities hold for every finite triple.
bool verify_norm_product_bounds(const DenseMatrix& a, const DenseMatrix& b,
                                const DenseMatrix& c);

// Lower-triangular L with L L^T = M. Zero pivots (within tolerance) are
// accepted so that singular PSD matrices factor; a clearly negative pivot
// throws SingularMatrixError.
DenseMatrix cholesky_psd(const DenseMatrix& m, double tol = 1e-10);

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
double min_eigenvalue_symmetric(const DenseMatrix& m);

DenseMatrix symmetrize(const DenseMatrix& m);

// Entrywise |a - b|_max.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

double l2_norm(std::span<const double> v);

}  // namespace tvvar

#endif  // TVVAR_LINALG_HPP_
