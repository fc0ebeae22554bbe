#ifndef TVVAR_LP_HPP_
#define TVVAR_LP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "tvvar/kernel.hpp"
#include "tvvar/linalg.hpp"

namespace tvvar {

// One row a^T x <= rhs.
struct LpConstraint {
  Vector coeffs;
  double rhs = 0.0;
};

// minimize cost^T x  subject to  a_i^T x <= rhs_i,  x >= 0.
struct StandardFormLP {
  std::size_t num_vars = 0;
  Vector cost;
  std::vector<LpConstraint> constraints;

  // Throws std::invalid_argument on length mismatches or non-finite data.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector solution;  // length num_vars when optimal
  double objective = 0.0;
  // Dual multipliers y <= 0 of the rows, one per input constraint, with
  // A^T y <= cost and cost^T x = rhs^T y at optimality.
  Vector duals;
  // Reduced costs of the structural variables at the final basis.
  Vector reduced_costs;
  std::size_t iterations = 0;
};

inline constexpr double kLpFeasibilityTol = 1e-9;
inline constexpr double kLpOptimalityTol = 1e-9;

// Two-phase primal simplex on a dense tableau. Pricing is Dantzig's with a
// Harris ratio test; a run of degenerate pivots switches to Bland's
// smallest-index rule, which rules out cycling. Rows with identical
// coefficient vectors are merged to the tightest right-hand side before the
// tableau is built. Deterministic for a fixed input. Throws NumericalError if
// the final point violates a row by more than 1e-8 (relative), or on the
// iteration limit.
LpResult solve_simplex(const StandardFormLP& lp);

// Plain-text dump for failure triage.
std::string to_debug_string(const StandardFormLP& lp);

// The l1-minimal Yule-Walker sub-problem for row j in the (v, w) split with
// u = v - w: 2d nonnegative variables, unit costs, and 4d rows encoding
//   |lag1_col_j - lag0 u|_max <= tau   and   |lagm1_row_j - u^T lag0|_max <= tau.
StandardFormLP build_clime_subproblem(const DenseMatrix& lag0, std::span<const double> lag1_col_j,
                                      std::span<const double> lagm1_row_j, double tau);

// u = v - w from a solution of build_clime_subproblem.
Vector clime_split_to_coefficients(std::span<const double> solution);

}  // namespace tvvar

#endif  // TVVAR_LP_HPP_
