#pragma once

// Exact two-phase primal simplex over the rationals.
//
//   maximize  c.x   subject to  A x = b,  x >= 0
//
// Dense tableau. The entering column has the largest reduced cost (least
// index on ties). The leaving row is chosen by the lexicographic ratio test
// against the basis the phase started from, which makes every pivot strictly
// increase the objective row lexicographically, so no basis repeats and the
// method terminates on degenerate problems.

#include "cbd/error.hpp"
#include "cbd/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbd {

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;                // length num_vars
  std::vector<std::vector<Rational>> constraints;  // equality rows
  std::vector<Rational> rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::optional<Rational> optimum;  // iff Optimal
  std::vector<Rational> solution;   // non-empty iff Optimal (and num_vars > 0)
};

inline void check_well_formed(const LinearProgram& lp) {
  if (lp.objective.size() != lp.num_vars)
    throw StructuralError("objective has " + std::to_string(lp.objective.size()) +
                          " coefficients, expected " + std::to_string(lp.num_vars));
  if (lp.rhs.size() != lp.constraints.size())
    throw StructuralError("rhs has " + std::to_string(lp.rhs.size()) + " entries for " +
                          std::to_string(lp.constraints.size()) + " constraint rows");
  for (std::size_t i = 0; i < lp.constraints.size(); ++i)
    if (lp.constraints[i].size() != lp.num_vars)
      throw StructuralError("constraint row " + std::to_string(i) + " has length " +
                            std::to_string(lp.constraints[i].size()) + ", expected " +
                            std::to_string(lp.num_vars));
}

// True iff x >= 0 and A x = b hold exactly.
inline bool check_solution(const LinearProgram& lp, std::span<const Rational> x) {
  check_well_formed(lp);
  if (x.size() != lp.num_vars)
    throw StructuralError("solution has " + std::to_string(x.size()) + " entries, expected " +
                          std::to_string(lp.num_vars));
  for (const auto& v : x)
    if (v < 0) return false;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < lp.num_vars; ++j)
      if (lp.constraints[i][j] != 0) lhs += lp.constraints[i][j] * x[j];
    if (lhs != lp.rhs[i]) return false;
  }
  return true;
}

namespace detail {

// Tableau in canonical form with respect to `basis`. The last column holds
// the right-hand side; `cost` holds reduced costs and, in its last entry,
// the negated objective value.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const Rational& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const Rational& rhs(std::size_t i) const { return rows_[i].back(); }
  Rational objective_value() const { return -cost_.back(); }

  // Installs a cost vector (maximization) and prices it out against the basis.
  void set_cost(std::span<const Rational> c) {
    const std::size_t n = c.size();
    cost_.assign(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) cost_[j] = c[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= n; ++j)
        if (rows_[i][j] != 0) cost_[j] -= cb * rows_[i][j];
    }
  }

  enum class Outcome { Optimal, Unbounded };

  // Runs pivots restricted to columns [0, allowed_cols).
  Outcome optimize(std::size_t allowed_cols) {
    const std::vector<std::size_t> reference = basis_;
    for (;;) {
      std::size_t entering = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (cost_[j] > 0 && (entering == allowed_cols || cost_[j] > cost_[entering])) entering = j;
      if (entering == allowed_cols) return Outcome::Optimal;

      std::vector<std::size_t> tied;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& a = rows_[i][entering];
        if (a <= 0) continue;
        Rational ratio = rows_[i].back() / a;
        if (tied.empty() || ratio < best_ratio) {
          tied.assign(1, i);
          best_ratio = std::move(ratio);
        } else if (ratio == best_ratio) {
          tied.push_back(i);
        }
      }
      if (tied.empty()) return Outcome::Unbounded;
      // Each pass keeps the rows with the smallest scaled entry in the next
      // reference column; the reference block is invertible, so one row survives.
      for (std::size_t k = 0; tied.size() > 1 && k < reference.size(); ++k) {
        std::vector<std::size_t> keep;
        Rational best;
        for (std::size_t i : tied) {
          Rational v = rows_[i][reference[k]] / rows_[i][entering];
          if (keep.empty() || v < best) {
            keep.assign(1, i);
            best = std::move(v);
          } else if (v == best) {
            keep.push_back(i);
          }
        }
        tied = std::move(keep);
      }
      pivot(tied.front(), entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& prow = rows_[row];
    const Rational inv = 1 / prow[col];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (prow[j] == 0) continue;
      prow[j] *= inv;
      nz.push_back(j);
    }
    auto eliminate = [&](std::vector<Rational>& r) {
      if (r[col] == 0) return;
      const Rational factor = r[col];
      for (std::size_t j : nz) r[j] -= factor * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != row) eliminate(rows_[i]);
    if (!cost_.empty()) eliminate(cost_);
    basis_[row] = col;
  }

  void erase_row(std::size_t row) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  // Drops trailing columns [keep, width) from every row, preserving rhs.
  void truncate_columns(std::size_t keep) {
    for (auto& r : rows_) {
      Rational b = std::move(r.back());
      r.resize(keep);
      r.push_back(std::move(b));
    }
    cost_.clear();
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> cost_;
};

}  // namespace detail

inline LpResult solve(const LinearProgram& lp) {
  check_well_formed(lp);
  const std::size_t n = lp.num_vars;
  const std::size_t m = lp.constraints.size();

  // Phase 1: one artificial per row, rows sign-flipped so that b >= 0.
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n + m + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = lp.rhs[i] < 0;
    for (std::size_t j = 0; j < n; ++j)
      rows[i][j] = flip ? Rational(-lp.constraints[i][j]) : lp.constraints[i][j];
    rows[i][n + i] = 1;
    rows[i][n + m] = flip ? Rational(-lp.rhs[i]) : lp.rhs[i];
    basis[i] = n + i;
  }
  detail::Tableau t(std::move(rows), std::move(basis));

  std::vector<Rational> phase1_cost(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = -1;
  t.set_cost(phase1_cost);
  t.optimize(n + m);  // bounded below by 0, never unbounded
  if (t.objective_value() < 0) return LpResult{LpStatus::Infeasible, std::nullopt, {}};

  // Drive zero-valued artificials out of the basis; rows where that is
  // impossible are linearly dependent and get dropped.
  for (std::size_t i = 0; i < t.num_rows();) {
    if (t.basis()[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (t.at(i, j) != 0) {
        col = j;
        break;
      }
    if (col == n) {
      t.erase_row(i);
      continue;
    }
    t.pivot(i, col);
    ++i;
  }
  t.truncate_columns(n);

  // Phase 2.
  t.set_cost(lp.objective);
  if (t.optimize(n) == detail::Tableau::Outcome::Unbounded)
    return LpResult{LpStatus::Unbounded, std::nullopt, {}};

  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = 0; i < t.num_rows(); ++i) x[t.basis()[i]] = t.rhs(i);
  Rational value = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (lp.objective[j] != 0) value += lp.objective[j] * x[j];
  return LpResult{LpStatus::Optimal, value, std::move(x)};
}

}  // namespace cbd
