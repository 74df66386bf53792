#pragma once

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ipfp {

// Joint action profile, one entry per player. Player 0 is the intelligent
// player (IP); players 1..n are the opponents.
using ActionProfile = std::vector<int>;
// Actions of the opponents only (players 1..n).
using OppProfile = std::vector<int>;

enum class TieRule {
  LowestIndex,  // pick the smallest action index in the argmax set
  Inertia,      // keep the current action if still optimal, else lowest index
};

struct MixedStrategy {
  int owner = 0;
  std::vector<Rational> probs;

  void validate() const {
    Rational sum = 0;
    for (const auto& p : probs) {
      if (p < 0) throw std::invalid_argument("negative probability in mixed strategy");
      sum += p;
    }
    if (sum != 1) throw std::invalid_argument("mixed strategy does not sum to 1");
  }

  static MixedStrategy point_mass(int owner, int action, int n_actions) {
    MixedStrategy m;
    m.owner = owner;
    m.probs.assign(n_actions, Rational(0));
    m.probs.at(action) = 1;
    return m;
  }

  bool operator==(const MixedStrategy&) const = default;
};

// Finite normal-form game with exact rational payoffs, stored as a dense
// tensor in row-major order over the players' action indices.
class Game {
 public:
  Game(std::vector<std::vector<std::string>> action_labels,
       std::vector<std::vector<Rational>> payoff_table)
      : labels_(std::move(action_labels)), payoffs_(std::move(payoff_table)) {
    if (labels_.size() < 2) throw std::invalid_argument("need at least 2 players");
    std::size_t expected = 1;
    for (const auto& acts : labels_) {
      if (acts.empty()) throw std::invalid_argument("empty action set");
      expected *= acts.size();
    }
    if (payoffs_.size() != expected)
      throw std::invalid_argument("payoff tensor has wrong number of entries");
    for (const auto& cell : payoffs_)
      if (cell.size() != labels_.size())
        throw std::invalid_argument("payoff entry has wrong player count");
  }

  int player_count() const { return (int)labels_.size(); }
  int opponent_count() const { return player_count() - 1; }
  int action_count(int player) const { return (int)labels_.at(player).size(); }
  const std::vector<std::string>& action_labels(int player) const { return labels_.at(player); }
  const std::string& action_label(int player, int a) const { return labels_.at(player).at(a); }

  int action_index(int player, const std::string& label) const {
    const auto& acts = labels_.at(player);
    auto it = std::find(acts.begin(), acts.end(), label);
    if (it == acts.end())
      throw std::invalid_argument("unknown action '" + label + "' for player " +
                                  std::to_string(player));
    return (int)(it - acts.begin());
  }

  void validate_profile(const ActionProfile& y) const {
    if ((int)y.size() != player_count())
      throw std::invalid_argument("profile length does not match player count");
    for (int i = 0; i < player_count(); ++i)
      if (y[i] < 0 || y[i] >= action_count(i))
        throw std::invalid_argument("action index out of bounds for player " + std::to_string(i));
  }

  // Stored payoff vector (one value per player) at a joint profile.
  const std::vector<Rational>& payoff(const ActionProfile& y) const {
    validate_profile(y);
    return payoffs_[flat_index(y)];
  }

  const Rational& payoff_of(int player, const ActionProfile& y) const {
    return payoff(y).at(player);
  }

  bool operator==(const Game& other) const {
    return labels_ == other.labels_ && payoffs_ == other.payoffs_;
  }

 private:
  std::size_t flat_index(const ActionProfile& y) const {
    std::size_t idx = 0;
    for (int i = 0; i < player_count(); ++i) idx = idx * labels_[i].size() + y[i];
    return idx;
  }

  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Rational>> payoffs_;
};

inline ActionProfile full_profile(int y0, const OppProfile& opp) {
  ActionProfile y(opp.size() + 1);
  y[0] = y0;
  std::copy(opp.begin(), opp.end(), y.begin() + 1);
  return y;
}

// Enumerates all opponent profiles (players 1..n) in lexicographic order.
inline std::vector<OppProfile> all_opponent_profiles(const Game& g) {
  std::vector<OppProfile> out;
  OppProfile cur(g.opponent_count(), 0);
  while (true) {
    out.push_back(cur);
    int j = g.opponent_count() - 1;
    while (j >= 0) {
      if (++cur[j] < g.action_count(j + 1)) break;
      cur[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

// View of the game with the IP frozen at one pure action.
struct Subgame {
  const Game* base;
  int fixed_ip_action;

  Subgame(const Game& g, int y0) : base(&g), fixed_ip_action(y0) {
    if (y0 < 0 || y0 >= g.action_count(0))
      throw std::invalid_argument("fixed IP action out of bounds");
  }

  const Rational& opponent_payoff(int opponent, const OppProfile& opp) const {
    return base->payoff_of(opponent, full_profile(fixed_ip_action, opp));
  }
};

inline Subgame extract_subgame(const Game& g, int y0) { return Subgame(g, y0); }

struct Finding {
  enum class Severity { Warning, Failure };
  Severity severity;
  std::string check;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool passed() const {
    return std::none_of(findings.begin(), findings.end(), [](const Finding& f) {
      return f.severity == Finding::Severity::Failure;
    });
  }
};

namespace detail {

// Sums (product of weights over players != `player`) * U_player over all joint
// profiles of the other players, with `player` fixed at each of its actions.
// Weights need not be normalized; positive per-player scaling does not change
// the argmax, which lets callers pass raw empirical counts.
inline std::vector<Rational> action_scores(const Game& g, int player,
                                           const std::vector<std::vector<Rational>>& weights) {
  const int np = g.player_count();
  if ((int)weights.size() != np)
    throw std::invalid_argument("need one weight vector per player");
  for (int i = 0; i < np; ++i)
    if (i != player && (int)weights[i].size() != g.action_count(i))
      throw std::invalid_argument("weight vector has wrong dimension for player " +
                                  std::to_string(i));
  std::vector<Rational> scores(g.action_count(player), Rational(0));
  ActionProfile y(np, 0);
  // Iterate the joint actions of everyone except `player`.
  std::vector<int> others;
  for (int i = 0; i < np; ++i)
    if (i != player) others.push_back(i);
  std::vector<int> idx(others.size(), 0);
  while (true) {
    Rational w = 1;
    for (std::size_t k = 0; k < others.size(); ++k) {
      y[others[k]] = idx[k];
      w *= weights[others[k]][idx[k]];
    }
    if (w != 0) {
      for (int a = 0; a < g.action_count(player); ++a) {
        y[player] = a;
        scores[a] += w * g.payoff_of(player, y);
      }
    }
    int k = (int)others.size() - 1;
    while (k >= 0) {
      if (++idx[k] < g.action_count(others[k])) break;
      idx[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return scores;
}

inline int argmax_with_tie(const std::vector<Rational>& scores, TieRule tie, int current) {
  int best = 0;
  for (int a = 1; a < (int)scores.size(); ++a)
    if (scores[a] > scores[best]) best = a;
  if (tie == TieRule::Inertia && current >= 0 && current < (int)scores.size() &&
      scores[current] == scores[best])
    return current;
  // LowestIndex: the scan above already keeps the first maximizer.
  return best;
}

}  // namespace detail

// Expected utility of `player` taking `own_action` while every other player
// draws independently from its mixed strategy (product of marginals).
inline Rational expected_utility_vs_mix(const Game& g, int player, int own_action,
                                        const std::vector<MixedStrategy>& others) {
  std::vector<std::vector<Rational>> weights(g.player_count());
  for (int i = 0; i < g.player_count(); ++i) {
    if (i == player) continue;
    if ((int)others.size() <= i)
      throw std::invalid_argument("missing strategy for player " + std::to_string(i));
    if (others[i].owner != i || (int)others[i].probs.size() != g.action_count(i))
      throw std::invalid_argument("strategy dimension mismatch for player " + std::to_string(i));
    weights[i] = others[i].probs;
  }
  if (own_action < 0 || own_action >= g.action_count(player))
    throw std::invalid_argument("own action out of bounds");
  return detail::action_scores(g, player, weights).at(own_action);
}

// Expected IP payoff for a mixed IP strategy against pure opponent actions.
inline Rational expected_ip_utility(const Game& g, const MixedStrategy& ip_mix,
                                    const OppProfile& opp) {
  if ((int)ip_mix.probs.size() != g.action_count(0))
    throw std::invalid_argument("IP mix dimension mismatch");
  if ((int)opp.size() != g.opponent_count())
    throw std::invalid_argument("opponent profile dimension mismatch");
  Rational v = 0;
  for (int k = 0; k < g.action_count(0); ++k)
    if (ip_mix.probs[k] != 0) v += ip_mix.probs[k] * g.payoff_of(0, full_profile(k, opp));
  return v;
}

inline int best_response(const Game& g, int player, const std::vector<MixedStrategy>& others,
                         TieRule tie, int current = -1) {
  std::vector<std::vector<Rational>> weights(g.player_count());
  for (int i = 0; i < g.player_count(); ++i) {
    if (i == player) continue;
    if (others[i].owner != i || (int)others[i].probs.size() != g.action_count(i))
      throw std::invalid_argument("strategy dimension mismatch for player " + std::to_string(i));
    weights[i] = others[i].probs;
  }
  return detail::argmax_with_tie(detail::action_scores(g, player, weights), tie, current);
}

// All opponent profiles of the subgame where no opponent has a strictly
// better unilateral deviation. May be empty.
inline std::vector<OppProfile> pure_nash(const Subgame& sg) {
  const Game& g = *sg.base;
  std::vector<OppProfile> out;
  for (const auto& opp : all_opponent_profiles(g)) {
    bool nash = true;
    for (int j = 1; j <= g.opponent_count() && nash; ++j) {
      const Rational& here = sg.opponent_payoff(j, opp);
      for (int a = 0; a < g.action_count(j); ++a) {
        if (a == opp[j - 1]) continue;
        OppProfile dev = opp;
        dev[j - 1] = a;
        if (sg.opponent_payoff(j, dev) > here) {
          nash = false;
          break;
        }
      }
    }
    if (nash) out.push_back(opp);
  }
  return out;
}

namespace detail {

inline std::string opp_profile_label(const Game& g, int y0, const OppProfile& opp) {
  std::string s = "(" + g.action_label(0, y0);
  for (int j = 0; j < (int)opp.size(); ++j) s += "," + g.action_label(j + 1, opp[j]);
  return s + ")";
}

}  // namespace detail

// Literal degeneracy scan: for each IP action and every player (including
// the IP), flags equal payoffs at distinct opponent profiles. Warning
// severity only; the binding structural gate is check_ordinal_potential.
inline ValidationReport check_nondegenerate(const Game& g) {
  ValidationReport report;
  const auto profiles = all_opponent_profiles(g);
  for (int y0 = 0; y0 < g.action_count(0); ++y0) {
    for (int j = 0; j <= g.opponent_count(); ++j) {
      for (std::size_t a = 0; a < profiles.size(); ++a) {
        for (std::size_t b = a + 1; b < profiles.size(); ++b) {
          if (g.payoff_of(j, full_profile(y0, profiles[a])) ==
              g.payoff_of(j, full_profile(y0, profiles[b]))) {
            report.findings.push_back(
                {Finding::Severity::Warning, "nondegenerate",
                 detail::opp_profile_label(g, y0, profiles[a]) + " vs " +
                     detail::opp_profile_label(g, y0, profiles[b]),
                 "player " + std::to_string(j) + " has equal payoff " +
                     to_string(g.payoff_of(j, full_profile(y0, profiles[a]))) +
                     " at two distinct opponent profiles"});
          }
        }
      }
    }
  }
  return report;
}

// Passes iff the strict better-response graph over the subgame's opponent
// profiles is acyclic and the subgame has exactly one pure Nash equilibrium.
// Acyclicity certifies the finite-improvement property.
inline ValidationReport check_ordinal_potential(const Subgame& sg) {
  const Game& g = *sg.base;
  ValidationReport report;
  const auto profiles = all_opponent_profiles(g);
  std::map<OppProfile, int> node_of;
  for (std::size_t i = 0; i < profiles.size(); ++i) node_of[profiles[i]] = (int)i;

  std::vector<std::vector<int>> adj(profiles.size());
  std::vector<int> indeg(profiles.size(), 0);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (int j = 1; j <= g.opponent_count(); ++j) {
      for (int a = 0; a < g.action_count(j); ++a) {
        if (a == profiles[i][j - 1]) continue;
        OppProfile dev = profiles[i];
        dev[j - 1] = a;
        if (sg.opponent_payoff(j, dev) > sg.opponent_payoff(j, profiles[i])) {
          adj[i].push_back(node_of[dev]);
          ++indeg[node_of[dev]];
        }
      }
    }
  }

  // Kahn's algorithm; leftover nodes lie on or downstream of a cycle.
  std::vector<int> queue;
  for (std::size_t i = 0; i < profiles.size(); ++i)
    if (indeg[i] == 0) queue.push_back((int)i);
  std::size_t seen = 0;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    ++seen;
    for (int v : adj[u])
      if (--indeg[v] == 0) queue.push_back(v);
  }
  if (seen != profiles.size()) {
    std::string cyc;
    for (std::size_t i = 0; i < profiles.size(); ++i)
      if (indeg[i] > 0)
        cyc += (cyc.empty() ? "" : " ") +
               detail::opp_profile_label(g, sg.fixed_ip_action, profiles[i]);
    report.findings.push_back({Finding::Severity::Failure, "ordinal-potential",
                               "subgame " + g.action_label(0, sg.fixed_ip_action),
                               "better-response cycle among: " + cyc});
  }

  const auto nash = pure_nash(sg);
  if (nash.size() != 1) {
    report.findings.push_back({Finding::Severity::Failure, "unique-pure-nash",
                               "subgame " + g.action_label(0, sg.fixed_ip_action),
                               "expected exactly one pure Nash equilibrium, found " +
                                   std::to_string(nash.size())});
  }
  return report;
}

}  // namespace ipfp
