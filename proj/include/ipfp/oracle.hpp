#pragma once

#include "game.hpp"
#include "lp.hpp"
#include "synthesis.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

// Deliberately naive brute-force verifiers, independent of the simplex and
// synthesis fast paths. Desk-scale inputs only.

namespace ipfp::oracle {

struct VertexSolution {
  std::vector<Rational> q;
  Rational value;
  std::vector<int> active_rows;
};

namespace detail {

// Solves M x = rhs exactly; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M,
                                                         std::vector<Rational> rhs) {
  const int n = (int)rhs.size();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col || M[r][col] == 0) continue;
      Rational f = M[r][col] / M[col][col];
      for (int k = col; k < n; ++k) M[r][k] -= f * M[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
  return x;
}

}  // namespace detail

// Enumerates all basic feasible solutions of {A q <= rhs, sum q = 1, q >= 0}
// by intersecting the simplex equality with every (n-1)-subset of constraints
// taken tight. Returns the best vertex plus the full deduplicated list.
inline std::pair<std::optional<VertexSolution>, std::vector<VertexSolution>> lp_vertex_oracle(
    const LinearProgram& lp) {
  const int n = lp.columns();
  if (n > 8) throw std::invalid_argument("vertex oracle is limited to 8 columns");
  const int m = (int)lp.rows.size();
  // Constraint pool: indices [0, m) are LP rows, [m, m+n) are q_k >= 0.
  const int pool = m + n;
  std::vector<VertexSolution> vertices;
  std::set<std::vector<Rational>> seen;

  std::vector<int> pick;
  auto try_active_set = [&](const std::vector<int>& active) {
    std::vector<std::vector<Rational>> M;
    std::vector<Rational> rhs;
    M.emplace_back(n, Rational(1));  // sum q = 1
    rhs.emplace_back(1);
    for (int idx : active) {
      if (idx < m) {
        M.push_back(lp.rows[idx]);
        rhs.push_back(lp.rhs_of(idx));
      } else {
        std::vector<Rational> row(n, Rational(0));
        row[idx - m] = 1;
        M.push_back(row);
        rhs.emplace_back(0);
      }
    }
    auto q = detail::solve_square(std::move(M), std::move(rhs));
    if (!q || !lp.satisfies(*q) || seen.count(*q)) return;
    seen.insert(*q);
    Rational value = 0;
    for (int k = 0; k < n; ++k) value += lp.objective[k] * (*q)[k];
    std::vector<int> active_rows;
    for (int r = 0; r < m; ++r)
      if (lp.row_value(r, *q) == lp.rhs_of(r)) active_rows.push_back(r);
    vertices.push_back({*q, value, active_rows});
  };

  // All (n-1)-subsets of the pool.
  std::vector<int> comb(n - 1);
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == n - 1) {
      try_active_set(comb);
      return;
    }
    for (int i = start; i < pool; ++i) {
      comb[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  if (n == 1) {
    try_active_set({});
  } else {
    recurse(recurse, 0, 0);
  }

  std::optional<VertexSolution> best;
  for (const auto& v : vertices)
    if (!best || v.value > best->value || (v.value == best->value && v.q < best->q)) best = v;
  return {best, vertices};
}

// Exhaustive argmax set of a player's actions against a fixed profile of
// mixed strategies for everyone else.
inline std::vector<int> best_response_oracle(const Game& g, int player,
                                             const std::vector<MixedStrategy>& others) {
  std::vector<Rational> util(g.action_count(player));
  for (int a = 0; a < g.action_count(player); ++a)
    util[a] = expected_utility_vs_mix(g, player, a, others);
  Rational best = util[0];
  for (const auto& u : util) best = std::max(best, u);
  std::vector<int> argmax;
  for (int a = 0; a < g.action_count(player); ++a)
    if (util[a] == best) argmax.push_back(a);
  return argmax;
}

// Recomputes the n-player synthesis using pure enumeration plus the vertex
// oracle; must agree with the simplex path on the chosen action and value.
inline SynthesisResult exhaustive_synthesis_oracle(const Game& g) {
  if (g.opponent_count() > 3) throw std::invalid_argument("oracle limited to 3 opponents");
  for (int i = 0; i < g.player_count(); ++i)
    if (g.action_count(i) > 4) throw std::invalid_argument("oracle limited to 4 actions/player");
  SynthesisResult result;
  std::optional<std::pair<int, Rational>> baseline;
  for (int y0 = 0; y0 < g.action_count(0); ++y0) {
    Subgame sg(g, y0);
    auto eqs = pure_nash(sg);
    if (eqs.size() != 1)
      throw std::invalid_argument("oracle requires a unique pure Nash per subgame");
    LinearProgram lp = build_lp(sg, eqs.front());
    auto [best, all] = lp_vertex_oracle(lp);
    if (!best) throw std::logic_error("vertex oracle found no feasible vertex");
    result.per_candidate.push_back({y0, eqs.front(), true, best->value, best->q});
    Rational pure_payoff = g.payoff_of(0, full_profile(y0, eqs.front()));
    if (!baseline || pure_payoff > baseline->second) baseline = {y0, pure_payoff};
    if (result.chosen_y0 < 0 || best->value > result.value) {
      result.chosen_y0 = y0;
      result.target_profile = eqs.front();
      result.mix = MixedStrategy{0, best->q};
      result.value = best->value;
    }
  }
  result.baseline_pure = *baseline;
  return result;
}

// Random 3-player games with integer payoffs in [1, 9], rejection-sampled
// until every subgame passes check_ordinal_potential. Seeded for repeatable
// test corpora.
inline Game random_validated_game(std::mt19937& rng, int ip_actions = 3, int opp1_actions = 3,
                                  int opp2_actions = 3) {
  std::uniform_int_distribution<int> payoff(1, 9);
  std::vector<std::vector<std::string>> labels = {{}, {}, {}};
  for (int a = 0; a < ip_actions; ++a) labels[0].push_back("I" + std::to_string(a));
  for (int a = 0; a < opp1_actions; ++a) labels[1].push_back("P" + std::to_string(a));
  for (int a = 0; a < opp2_actions; ++a) labels[2].push_back("Q" + std::to_string(a));
  while (true) {
    std::vector<std::vector<Rational>> cells;
    cells.reserve((std::size_t)ip_actions * opp1_actions * opp2_actions);
    for (int i = 0; i < ip_actions * opp1_actions * opp2_actions; ++i)
      cells.push_back({Rational(payoff(rng)), Rational(payoff(rng)), Rational(payoff(rng))});
    Game g(labels, std::move(cells));
    bool ok = true;
    for (int y0 = 0; y0 < ip_actions && ok; ++y0)
      ok = check_ordinal_potential(Subgame(g, y0)).passed();
    if (ok) return g;
  }
}

}  // namespace ipfp::oracle
