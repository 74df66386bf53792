#pragma once

#include "game.hpp"
#include "lp.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ipfp {

// A subgame failed the structural requirements (better-response cycle or no
// unique pure Nash equilibrium).
struct StructureError : std::runtime_error {
  ValidationReport report;
  StructureError(std::string what, ValidationReport rep)
      : std::runtime_error(std::move(what)), report(std::move(rep)) {}
};

struct CandidateResult {
  int index;  // IP action y0 (n-player) or opponent column j (2-player)
  OppProfile nash;
  bool feasible = true;
  Rational lp_value;
  std::vector<Rational> lp_solution;
  LinearProgram lp;
};

struct SynthesisResult {
  bool two_player = false;
  int chosen_y0 = -1;  // -1 for the two-player path (no subgame anchor)
  OppProfile target_profile;
  MixedStrategy mix;
  Rational value;
  std::vector<CandidateResult> per_candidate;
  std::pair<int, Rational> baseline_pure;
  std::optional<Rational> nash_fp_payoff;
};

// One row per (opponent j, deviation y'_j != y*_j):
//   row[k] = U_j(k, y'_j, y*_{-j}) - U_j(k, y*_j, y*_{-j}),
// objective c_k = U_0(k, y*). Requires `nash` to be an equilibrium of the
// subgame; the point mass on the subgame's own IP action is then feasible.
inline LinearProgram build_lp(const Subgame& sg, const OppProfile& nash) {
  const Game& g = *sg.base;
  {
    auto eqs = pure_nash(sg);
    if (std::find(eqs.begin(), eqs.end(), nash) == eqs.end())
      throw std::invalid_argument("target profile is not a pure Nash equilibrium of the subgame");
  }
  LinearProgram lp;
  lp.objective.reserve(g.action_count(0));
  for (int k = 0; k < g.action_count(0); ++k)
    lp.objective.push_back(g.payoff_of(0, full_profile(k, nash)));
  for (int j = 1; j <= g.opponent_count(); ++j) {
    for (int dev = 0; dev < g.action_count(j); ++dev) {
      if (dev == nash[j - 1]) continue;
      OppProfile alt = nash;
      alt[j - 1] = dev;
      std::vector<Rational> row;
      row.reserve(g.action_count(0));
      for (int k = 0; k < g.action_count(0); ++k)
        row.push_back(g.payoff_of(j, full_profile(k, alt)) -
                      g.payoff_of(j, full_profile(k, nash)));
      lp.rows.push_back(std::move(row));
      lp.labels.push_back({j, dev});
    }
  }
  return lp;
}

namespace detail {

inline void require_valid_subgame(const Game& g, int y0, const Subgame& sg) {
  auto report = check_ordinal_potential(sg);
  if (!report.passed())
    throw StructureError("subgame '" + g.action_label(0, y0) +
                             "' is not a valid ordinal-potential subgame",
                         std::move(report));
}

inline std::vector<Rational> point_mass_q(int n, int k) {
  std::vector<Rational> q(n, Rational(0));
  q[k] = 1;
  return q;
}

}  // namespace detail

// Convergence-based mixed strategy for n >= 2 opponents: per IP action, solve
// the LP that pins the opponents at the subgame's unique pure Nash
// equilibrium, then pick the best subgame (ties to the lowest IP index).
inline SynthesisResult synthesize_n_player(const Game& g) {
  if (g.player_count() < 3)
    throw std::invalid_argument("n-player synthesis needs at least 2 opponents");
  SynthesisResult result;
  std::optional<std::pair<int, Rational>> baseline;
  for (int y0 = 0; y0 < g.action_count(0); ++y0) {
    Subgame sg(g, y0);
    detail::require_valid_subgame(g, y0, sg);
    OppProfile nash = pure_nash(sg).front();
    LinearProgram lp = build_lp(sg, nash);
    // Point-mass feasibility and the anchor-column sign structure both follow
    // from `nash` being an equilibrium of this subgame; assert before solving.
    if (!lp.satisfies(detail::point_mass_q(lp.columns(), y0)))
      throw std::logic_error("point-mass anchor is not feasible for its own subgame LP");
    for (const auto& row : lp.rows)
      if (row[y0] > 0) throw std::logic_error("anchor column has a positive LP entry");
    LpSolution sol = solve_lp(lp);
    if (!sol.feasible) throw std::logic_error("subgame LP infeasible despite point-mass anchor");
    result.per_candidate.push_back({y0, nash, true, sol.value, sol.q, lp});
    Rational pure_payoff = g.payoff_of(0, full_profile(y0, nash));
    if (!baseline || pure_payoff > baseline->second) baseline = {y0, pure_payoff};
    if (result.chosen_y0 < 0 || sol.value > result.value) {
      result.chosen_y0 = y0;
      result.target_profile = nash;
      result.mix = MixedStrategy{0, sol.q};
      result.value = sol.value;
    }
  }
  result.baseline_pure = *baseline;
  if (result.value != expected_ip_utility(g, result.mix, result.target_profile))
    throw std::logic_error("LP value disagrees with expected IP utility");
  if (result.value < result.baseline_pure.second)
    throw std::logic_error("synthesized value below the pure baseline");
  return result;
}

// Two-player optimum: per non-dominated opponent column j, maximize the IP's
// expected payoff subject to j being a weak best response for the opponent.
// Dominated columns show up as infeasible LPs and are skipped.
inline SynthesisResult synthesize_two_player(const Game& g) {
  if (g.player_count() != 2)
    throw std::invalid_argument("two-player synthesis needs exactly 2 players");
  SynthesisResult result;
  result.two_player = true;
  const int n0 = g.action_count(0);
  int chosen_col = -1;
  for (int j = 0; j < g.action_count(1); ++j) {
    LinearProgram lp;
    for (int k = 0; k < n0; ++k) lp.objective.push_back(g.payoff_of(0, {k, j}));
    for (int alt = 0; alt < g.action_count(1); ++alt) {
      if (alt == j) continue;
      std::vector<Rational> row;
      for (int k = 0; k < n0; ++k)
        row.push_back(g.payoff_of(1, {k, alt}) - g.payoff_of(1, {k, j}));
      lp.rows.push_back(std::move(row));
      lp.labels.push_back({1, alt});
    }
    LpSolution sol = solve_lp(lp);
    CandidateResult cand{j, {j}, sol.feasible, sol.value, sol.q, lp};
    result.per_candidate.push_back(cand);
    if (!sol.feasible) continue;
    if (chosen_col < 0 || sol.value > result.value) {
      chosen_col = j;
      result.target_profile = {j};
      result.mix = MixedStrategy{0, sol.q};
      result.value = sol.value;
    }
  }
  if (chosen_col < 0)
    throw std::logic_error("all opponent columns infeasible; opponent has no FP best response");

  // Pure baseline (Stackelberg shift): the opponent best-responds to a point
  // mass, lowest index on ties per the two-player indexing assumption.
  std::optional<std::pair<int, Rational>> baseline;
  for (int k = 0; k < n0; ++k) {
    std::vector<MixedStrategy> others(2);
    others[0] = MixedStrategy::point_mass(0, k, n0);
    int br = best_response(g, 1, others, TieRule::LowestIndex);
    Rational v = g.payoff_of(0, {k, br});
    if (!baseline || v > baseline->second) baseline = {k, v};
  }
  result.baseline_pure = *baseline;
  if (result.value != expected_ip_utility(g, result.mix, result.target_profile))
    throw std::logic_error("LP value disagrees with expected IP utility");
  if (result.value < result.baseline_pure.second)
    throw std::logic_error("synthesized value below the pure baseline");
  return result;
}

inline SynthesisResult synthesize(const Game& g) {
  return g.player_count() == 2 ? synthesize_two_player(g) : synthesize_n_player(g);
}

// Best payoff available to an IP restricted to one pure action forever.
inline std::pair<int, Rational> pure_baseline(const Game& g) {
  if (g.player_count() == 2) {
    return synthesize_two_player(g).baseline_pure;
  }
  std::optional<std::pair<int, Rational>> best;
  for (int y0 = 0; y0 < g.action_count(0); ++y0) {
    Subgame sg(g, y0);
    detail::require_valid_subgame(g, y0, sg);
    OppProfile nash = pure_nash(sg).front();
    Rational v = g.payoff_of(0, full_profile(y0, nash));
    if (!best || v > best->second) best = {y0, v};
  }
  return *best;
}

}  // namespace ipfp
