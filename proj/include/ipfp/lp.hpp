#pragma once

#include "rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ipfp {

struct RowLabel {
  int opponent;   // deviating opponent j (1-based player index), or -1
  int deviation;  // alternative action index y'_j
};

// maximize objective . q  subject to  rows . q <= rhs,  sum(q) = 1,  q >= 0.
// Rows generated from subgames always have rhs = 0; the nonzero-rhs form is
// used internally for lexicographic tie-breaking.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;  // empty means all-zero
  std::vector<RowLabel> labels;

  int columns() const { return (int)objective.size(); }
  Rational rhs_of(std::size_t r) const { return rhs.empty() ? Rational(0) : rhs.at(r); }

  Rational row_value(std::size_t r, const std::vector<Rational>& q) const {
    Rational v = 0;
    for (int k = 0; k < columns(); ++k) v += rows[r][k] * q[k];
    return v;
  }

  bool satisfies(const std::vector<Rational>& q) const {
    Rational sum = 0;
    for (const auto& x : q) {
      if (x < 0) return false;
      sum += x;
    }
    if (sum != 1) return false;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (row_value(r, q) > rhs_of(r)) return false;
    return true;
  }
};

struct LpSolution {
  bool feasible = false;
  std::vector<Rational> q;
  Rational value;
};

namespace detail {

// Dense exact-rational two-phase simplex with Bland's anti-cycling rule.
// maximize c.x  s.t.  A x (sense) b,  x >= 0, sense per row 'L' (<=) or 'E'.
struct SimplexResult {
  enum class Status { Optimal, Infeasible, Unbounded } status;
  std::vector<Rational> x;
  Rational value;
};

class ExactSimplex {
 public:
  SimplexResult solve(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                      std::vector<char> sense, const std::vector<Rational>& c) {
    const int m = (int)A.size();
    const int n = (int)c.size();
    // Normalize to b >= 0.
    for (int r = 0; r < m; ++r) {
      if (b[r] < 0) {
        for (auto& v : A[r]) v = -v;
        b[r] = -b[r];
        sense[r] = (sense[r] == 'L') ? 'G' : sense[r];
      }
    }
    // Columns: structural n, then one slack/surplus per inequality, then one
    // artificial per 'G'/'E' row.
    int n_slack = 0, n_art = 0;
    for (char s : sense) {
      if (s == 'L' || s == 'G') ++n_slack;
      if (s == 'G' || s == 'E') ++n_art;
    }
    total_ = n + n_slack + n_art;
    tab_.assign(m, std::vector<Rational>(total_ + 1, Rational(0)));
    basis_.assign(m, -1);
    std::vector<int> artificial_cols;
    int slack_at = n, art_at = n + n_slack;
    for (int r = 0; r < m; ++r) {
      for (int k = 0; k < n; ++k) tab_[r][k] = A[r][k];
      tab_[r][total_] = b[r];
      if (sense[r] == 'L') {
        tab_[r][slack_at] = 1;
        basis_[r] = slack_at++;
      } else if (sense[r] == 'G') {
        tab_[r][slack_at++] = -1;
        tab_[r][art_at] = 1;
        basis_[r] = art_at;
        artificial_cols.push_back(art_at++);
      } else {  // 'E'
        tab_[r][art_at] = 1;
        basis_[r] = art_at;
        artificial_cols.push_back(art_at++);
      }
    }

    if (!artificial_cols.empty()) {
      // Phase 1: maximize -(sum of artificials).
      std::vector<Rational> c1(total_, Rational(0));
      for (int col : artificial_cols) c1[col] = -1;
      Rational v1 = optimize(c1, n);
      if (v1 < 0) return {SimplexResult::Status::Infeasible, {}, Rational(0)};
      // Pivot any artificial still (degenerately) in the basis out, or drop
      // its all-zero row from consideration by leaving it; mark artificials
      // unusable for phase 2.
      for (int r = 0; r < m; ++r) {
        if (tab_[r][total_] == 0 && is_artificial(basis_[r], n + n_slack)) {
          for (int k = 0; k < n + n_slack; ++k) {
            if (tab_[r][k] != 0) {
              pivot(r, k);
              break;
            }
          }
        }
      }
      blocked_from_ = n + n_slack;  // artificials may not re-enter
    } else {
      blocked_from_ = total_;
    }

    std::vector<Rational> c2(total_, Rational(0));
    for (int k = 0; k < n; ++k) c2[k] = c[k];
    Rational v2;
    if (!optimize_checked(c2, n, v2))
      return {SimplexResult::Status::Unbounded, {}, Rational(0)};

    std::vector<Rational> x(n, Rational(0));
    for (int r = 0; r < m; ++r)
      if (basis_[r] < n) x[basis_[r]] = tab_[r][total_];
    return {SimplexResult::Status::Optimal, x, v2};
  }

 private:
  bool is_artificial(int col, int first_art) const { return col >= first_art; }

  void pivot(int row, int col) {
    Rational p = tab_[row][col];
    for (auto& v : tab_[row]) v /= p;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if ((int)r == row || tab_[r][col] == 0) continue;
      Rational f = tab_[r][col];
      for (int k = 0; k <= total_; ++k) tab_[r][k] -= f * tab_[row][k];
    }
    basis_[row] = col;
  }

  // Reduced cost of column k for objective c given the current basis.
  Rational reduced_cost(const std::vector<Rational>& c, int k) const {
    Rational z = 0;
    for (std::size_t r = 0; r < tab_.size(); ++r) z += c[basis_[r]] * tab_[r][k];
    return c[k] - z;
  }

  Rational objective_value(const std::vector<Rational>& c) const {
    Rational z = 0;
    for (std::size_t r = 0; r < tab_.size(); ++r) z += c[basis_[r]] * tab_[r][total_];
    return z;
  }

  // Bland's rule: entering = lowest-index column with positive reduced cost,
  // leaving = lowest-index basic variable among minimum-ratio rows.
  bool optimize_checked(const std::vector<Rational>& c, int /*n*/, Rational& value) {
    while (true) {
      int enter = -1;
      int limit = blocked_from_;
      for (int k = 0; k < limit; ++k) {
        if (reduced_cost(c, k) > 0) {
          enter = k;
          break;
        }
      }
      if (enter < 0) {
        value = objective_value(c);
        return true;
      }
      int leave = -1;
      Rational best_ratio = 0;
      for (std::size_t r = 0; r < tab_.size(); ++r) {
        if (tab_[r][enter] <= 0) continue;
        Rational ratio = tab_[r][total_] / tab_[r][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = (int)r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  Rational optimize(const std::vector<Rational>& c, int n) {
    int saved = blocked_from_;
    blocked_from_ = total_;
    Rational v;
    if (!optimize_checked(c, n, v)) throw std::logic_error("phase-1 LP unbounded");
    blocked_from_ = saved;
    return v;
  }

  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
  int total_ = 0;
  int blocked_from_ = 0;
};

inline SimplexResult solve_over_simplex(const LinearProgram& lp,
                                        const std::vector<Rational>& objective,
                                        const std::vector<std::pair<int, Rational>>& fixed,
                                        const std::vector<Rational>* value_row = nullptr,
                                        Rational value_rhs = Rational(0)) {
  const int n = lp.columns();
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<char> sense;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    A.push_back(lp.rows[r]);
    b.push_back(lp.rhs_of(r));
    sense.push_back('L');
  }
  // Simplex constraint.
  A.emplace_back(n, Rational(1));
  b.emplace_back(1);
  sense.push_back('E');
  if (value_row) {
    A.push_back(*value_row);
    b.push_back(value_rhs);
    sense.push_back('E');
  }
  for (const auto& [col, val] : fixed) {
    std::vector<Rational> row(n, Rational(0));
    row[col] = 1;
    A.push_back(row);
    b.push_back(val);
    sense.push_back('E');
  }
  return ExactSimplex().solve(std::move(A), std::move(b), std::move(sense), objective);
}

}  // namespace detail

// Exact optimal solution over {A q <= rhs, sum q = 1, q >= 0}. Among optimal
// vertices the lexicographically smallest q is returned, via sequential
// minimization of q_0, q_1, ... on the optimal face.
inline LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.columns();
  if (n < 1) throw std::invalid_argument("LP has no columns");
  for (const auto& row : lp.rows)
    if ((int)row.size() != n) throw std::invalid_argument("LP row dimension mismatch");

  auto first = detail::solve_over_simplex(lp, lp.objective, {});
  if (first.status == detail::SimplexResult::Status::Infeasible) return {};
  if (first.status != detail::SimplexResult::Status::Optimal)
    throw std::logic_error("LP over the simplex cannot be unbounded");

  LpSolution out;
  out.feasible = true;
  out.value = first.value;

  std::vector<std::pair<int, Rational>> fixed;
  for (int k = 0; k < n - 1; ++k) {
    std::vector<Rational> minimize_k(n, Rational(0));
    minimize_k[k] = -1;
    auto step = detail::solve_over_simplex(lp, minimize_k, fixed, &lp.objective, out.value);
    if (step.status != detail::SimplexResult::Status::Optimal)
      throw std::logic_error("lexicographic refinement lost feasibility");
    fixed.emplace_back(k, -step.value);
  }
  out.q.assign(n, Rational(0));
  Rational sum = 0;
  for (const auto& [col, val] : fixed) {
    out.q[col] = val;
    sum += val;
  }
  out.q[n - 1] = Rational(1) - sum;
  if (!lp.satisfies(out.q)) throw std::logic_error("LP solution fails its own constraints");
  return out;
}

}  // namespace ipfp
