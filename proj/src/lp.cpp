#include "tvvar/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tvvar {

void StandardFormLP::validate() const {
  if (cost.size() != num_vars) throw std::invalid_argument("cost length differs from num_vars");
  for (double c : cost)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite cost");
  for (const auto& row : constraints) {
    if (row.coeffs.size() != num_vars)
      throw std::invalid_argument("constraint length differs from num_vars");
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite right-hand side");
    for (double a : row.coeffs)
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite coefficient");
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kHarrisTol = 1e-10;
constexpr double kLpAccuracyTol = 1e-8;
constexpr std::size_t kMaxIterations = 200000;

class Tableau {
 public:
  // Rows: equality rows 0..m-1, objective row m. Column `width_ - 1` is rhs.
  Tableau(std::size_t m, std::size_t cols) : m_(m), width_(cols + 1), data_((m + 1) * width_, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, width_ - 1); }
  double rhs(std::size_t r) const { return at(r, width_ - 1); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return width_ - 1; }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = &data_[pr * width_];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

 private:
  std::size_t m_;
  std::size_t width_;
  std::vector<double> data_;
};

struct SimplexState {
  Tableau tab;
  std::vector<std::size_t> basis;
  std::vector<bool> row_active;
  std::size_t iterations = 0;
};

enum class PhaseOutcome { optimal, unbounded };

// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr std::size_t kDegenerateStreak = 50;

// Dantzig pricing with a Harris two-pass ratio test, which prefers large
// pivots among near-tied rows. After a run of degenerate pivots the phase
// falls back to Bland's rule (lowest improving column, lowest-index basic
// variable among exact ratio ties) until the objective moves again, so
// cycling cannot occur.
PhaseOutcome run_phase(SimplexState& s, const std::vector<bool>& allowed) {
  Tableau& t = s.tab;
  const std::size_t m = t.rows();
  std::size_t degenerate = 0;
  while (true) {
    if (++s.iterations > kMaxIterations) throw NumericalError("simplex iteration limit reached");
    const bool bland = degenerate >= kDegenerateStreak;
    std::size_t enter = t.cols();
    double most = -kLpOptimalityTol;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (!allowed[c]) continue;
      const double rc = t.at(m, c);
      if (rc < most) {
        enter = c;
        most = rc;
        if (bland) break;
      }
    }
    if (enter == t.cols()) return PhaseOutcome::optimal;

    std::size_t leave = m;
    if (bland) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        if (!s.row_active[r]) continue;
        const double a = t.at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(t.rhs(r), 0.0) / a;
        if (leave == m || ratio < best ||
            (ratio == best && s.basis[r] < s.basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    } else {
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        if (!s.row_active[r]) continue;
        const double a = t.at(r, enter);
        if (a <= kPivotTol) continue;
        bound = std::min(bound, (std::max(t.rhs(r), 0.0) + kHarrisTol) / a);
      }
      double biggest = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        if (!s.row_active[r]) continue;
        const double a = t.at(r, enter);
        if (a <= kPivotTol) continue;
        if (std::max(t.rhs(r), 0.0) / a <= bound && a > biggest) {
          biggest = a;
          leave = r;
        }
      }
    }
    if (leave == m) return PhaseOutcome::unbounded;
    const double step = std::max(t.rhs(leave), 0.0) / t.at(leave, enter);
    degenerate = step * -most > 1e-12 ? 0 : degenerate + 1;
    t.pivot(leave, enter);
    s.basis[leave] = enter;
    // Harris steps may leave basic values a hair below zero.
    for (std::size_t r = 0; r < m; ++r)
      if (t.rhs(r) < 0.0 && t.rhs(r) > -kHarrisTol) t.rhs(r) = 0.0;
  }
}

// Drops rows that share a coefficient vector with an earlier row, keeping the
// smallest right-hand side. `origin[k]` maps kept row k to its input index.
std::vector<LpConstraint> merge_parallel_rows(const std::vector<LpConstraint>& rows,
                                              std::vector<std::size_t>& origin) {
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<LpConstraint> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, inserted] = seen.emplace(rows[i].coeffs, kept.size());
    if (inserted) {
      kept.push_back(rows[i]);
      origin.push_back(i);
    } else if (rows[i].rhs < kept[it->second].rhs) {
      kept[it->second].rhs = rows[i].rhs;
      origin[it->second] = i;
    }
  }
  return kept;
}

}  // namespace

LpResult solve_simplex(const StandardFormLP& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars;
  std::vector<std::size_t> origin;
  const std::vector<LpConstraint> rows = merge_parallel_rows(lp.constraints, origin);
  const std::size_t m = rows.size();

  // Columns: structural [0, n), slack [n, n+m), artificial [n+m, n+m+k).
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (rows[i].rhs < 0.0) art_rows.push_back(i);
  const std::size_t k = art_rows.size();
  const std::size_t total = n + m + k;

  SimplexState s{Tableau(m, total), std::vector<std::size_t>(m), std::vector<bool>(m, true), 0};
  Tableau& t = s.tab;
  std::vector<double> sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = rows[i].rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * rows[i].coeffs[j];
    t.at(i, n + i) = sign[i];
    t.rhs(i) = sign[i] * rows[i].rhs;
    s.basis[i] = n + i;
  }
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t i = art_rows[a];
    t.at(i, n + m + a) = 1.0;
    s.basis[i] = n + m + a;
  }

  LpResult result;
  std::vector<bool> allowed(total, true);

  if (k > 0) {
    // Phase 1: minimize the sum of artificials, priced out of the basis.
    for (std::size_t c = 0; c <= total; ++c) {
      double v = (c >= n + m && c < total) ? 1.0 : 0.0;
      for (std::size_t i : art_rows) v -= (c == total) ? t.rhs(i) : t.at(i, c);
      if (c == total) t.rhs(m) = v;
      else t.at(m, c) = v;
    }
    run_phase(s, allowed);
    const double infeasibility = -t.rhs(m);
    if (infeasibility > kLpFeasibilityTol) {
      result.status = LpStatus::infeasible;
      result.iterations = s.iterations;
      return result;
    }
    // Pivot remaining zero-level artificials out; rows with no usable
    // column are linearly dependent and are retired.
    for (std::size_t r = 0; r < m; ++r) {
      if (s.basis[r] < n + m) continue;
      std::size_t col = total;
      for (std::size_t c = 0; c < n + m; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col == total) {
        s.row_active[r] = false;
      } else {
        t.pivot(r, col);
        s.basis[r] = col;
      }
    }
    for (std::size_t c = n + m; c < total; ++c) allowed[c] = false;
  }

  // Phase 2 objective row: reduced costs c_j - c_B^T B^-1 a_j.
  auto cost_of = [&](std::size_t c) { return c < n ? lp.cost[c] : 0.0; };
  for (std::size_t c = 0; c <= total; ++c) {
    double v = (c < total) ? cost_of(c) : 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (!s.row_active[r]) continue;
      const double cb = cost_of(s.basis[r]);
      if (cb == 0.0) continue;
      v -= cb * ((c == total) ? t.rhs(r) : t.at(r, c));
    }
    if (c == total) t.rhs(m) = v;
    else t.at(m, c) = (c < n + m) ? v : 0.0;
  }

  if (run_phase(s, allowed) == PhaseOutcome::unbounded) {
    result.status = LpStatus::unbounded;
    result.iterations = s.iterations;
    return result;
  }

  result.status = LpStatus::optimal;
  result.iterations = s.iterations;
  result.solution.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (s.row_active[r] && s.basis[r] < n) result.solution[s.basis[r]] = std::max(t.rhs(r), 0.0);
  }
  // Accuracy guard against drift in the eliminated tableau.
  for (const auto& row : lp.constraints) {
    double lhs = 0.0, scale = std::abs(row.rhs);
    for (std::size_t j = 0; j < n; ++j) {
      lhs += row.coeffs[j] * result.solution[j];
      scale = std::max(scale, std::abs(row.coeffs[j] * result.solution[j]));
    }
    if (lhs - row.rhs > kLpAccuracyTol * (1.0 + scale))
      throw NumericalError("simplex lost accuracy: a constraint is violated by " +
                           std::to_string(lhs - row.rhs));
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.cost[j] * result.solution[j];
  result.reduced_costs.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) result.reduced_costs[j] = t.at(m, j);
  // The slack of row i has cost 0 and column sign_i e_i, so its reduced cost
  // is -y'_i sign_i, i.e. the negated dual of the original row.
  result.duals.assign(lp.constraints.size(), 0.0);
  for (std::size_t i = 0; i < m; ++i) result.duals[origin[i]] = -t.at(m, n + i);
  return result;
}

std::string to_debug_string(const StandardFormLP& lp) {
  std::ostringstream out;
  out.precision(17);
  out << "vars " << lp.num_vars << "\nmin";
  for (double c : lp.cost) out << ' ' << c;
  out << "\nrows " << lp.constraints.size() << '\n';
  for (const auto& row : lp.constraints) {
    for (double a : row.coeffs) out << a << ' ';
    out << "<= " << row.rhs << '\n';
  }
  return out.str();
}

StandardFormLP build_clime_subproblem(const DenseMatrix& lag0, std::span<const double> lag1_col_j,
                                      std::span<const double> lagm1_row_j, double tau) {
  if (!lag0.is_square()) throw DimensionError("lag-0 covariance must be square");
  const std::size_t d = lag0.rows();
  if (lag1_col_j.size() != d || lagm1_row_j.size() != d)
    throw DimensionError("target vectors must have length d");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be nonnegative");

  StandardFormLP lp;
  lp.num_vars = 2 * d;
  lp.cost.assign(2 * d, 1.0);
  lp.constraints.reserve(4 * d);
  // Row k of lag0 u is sum_l lag0(k,l) (v_l - w_l); row k of u^T lag0 uses
  // column k of lag0.
  auto add_pair = [&](auto coeff_of, double target) {
    LpConstraint upper{Vector(2 * d), tau + target};
    LpConstraint lower{Vector(2 * d), tau - target};
    for (std::size_t l = 0; l < d; ++l) {
      const double a = coeff_of(l);
      upper.coeffs[l] = a;
      upper.coeffs[d + l] = -a;
      lower.coeffs[l] = -a;
      lower.coeffs[d + l] = a;
    }
    lp.constraints.push_back(std::move(upper));
    lp.constraints.push_back(std::move(lower));
  };
  for (std::size_t k = 0; k < d; ++k)
    add_pair([&](std::size_t l) { return lag0(k, l); }, lag1_col_j[k]);
  for (std::size_t k = 0; k < d; ++k)
    add_pair([&](std::size_t l) { return lag0(l, k); }, lagm1_row_j[k]);
  return lp;
}

Vector clime_split_to_coefficients(std::span<const double> solution) {
  if (solution.size() % 2 != 0) throw DimensionError("split solution must have even length");
  const std::size_t d = solution.size() / 2;
  Vector u(d);
  for (std::size_t l = 0; l < d; ++l) u[l] = solution[l] - solution[d + l];
  return u;
}

}  // namespace tvvar
