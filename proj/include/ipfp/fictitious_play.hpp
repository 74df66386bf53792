#pragma once

#include "game.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ipfp {

// Per-player action counts realizing the empirical frequencies of play.
struct EmpiricalState {
  std::vector<std::vector<long long>> counts;  // [player][action]
  std::vector<long long> steps;                // observations per player
  ActionProfile last;                          // most recent completed stage

  MixedStrategy marginal(int player) const {
    if (steps.at(player) <= 0) throw std::logic_error("no observations for player");
    MixedStrategy m;
    m.owner = player;
    m.probs.reserve(counts[player].size());
    for (long long c : counts[player]) m.probs.emplace_back(Rational(c, steps[player]));
    return m;
  }
};

inline EmpiricalState init_state(const Game& g, const ActionProfile& initial) {
  g.validate_profile(initial);
  EmpiricalState s;
  s.counts.resize(g.player_count());
  s.steps.assign(g.player_count(), 1);
  for (int i = 0; i < g.player_count(); ++i) {
    s.counts[i].assign(g.action_count(i), 0);
    s.counts[i][initial[i]] = 1;
  }
  s.last = initial;
  return s;
}

// One stage of alternating fictitious play. The IP moves first with
// `ip_action`; opponents respond in index order, each seeing the same-stage
// actions of lower-indexed players inside their empirical marginals and the
// through-(t-1) marginals of higher-indexed players.
inline std::pair<ActionProfile, EmpiricalState> alternating_step(const Game& g,
                                                                const EmpiricalState& state,
                                                                int ip_action, TieRule tie) {
  if (ip_action < 0 || ip_action >= g.action_count(0))
    throw std::invalid_argument("IP action out of bounds");
  EmpiricalState next = state;
  ActionProfile profile(g.player_count());
  profile[0] = ip_action;
  next.counts[0][ip_action]++;
  next.steps[0]++;
  for (int j = 1; j < g.player_count(); ++j) {
    // Unnormalized count weights; players < j come from `next` (time t
    // included), players > j from `state` (through t-1).
    std::vector<std::vector<Rational>> weights(g.player_count());
    for (int i = 0; i < g.player_count(); ++i) {
      if (i == j) continue;
      const auto& src = (i < j) ? next.counts[i] : state.counts[i];
      weights[i].reserve(src.size());
      for (long long c : src) weights[i].emplace_back(c);
    }
    int a = detail::argmax_with_tie(detail::action_scores(g, j, weights), tie, state.last[j]);
    profile[j] = a;
    next.counts[j][a]++;
    next.steps[j]++;
  }
  next.last = profile;
  return {profile, next};
}

// How the IP picks its action each stage.
struct IpPolicy {
  enum class Kind { FictitiousPlay, FixedAction, ScriptedSequence };
  Kind kind = Kind::FictitiousPlay;
  TieRule ip_tie = TieRule::LowestIndex;  // FictitiousPlay only
  int fixed_action = 0;                   // FixedAction only
  std::vector<int> warmup;                // ScriptedSequence
  std::vector<int> repeat;                // ScriptedSequence

  static IpPolicy fictitious_play(TieRule tie = TieRule::LowestIndex) {
    IpPolicy p;
    p.kind = Kind::FictitiousPlay;
    p.ip_tie = tie;
    return p;
  }
  static IpPolicy fixed(int action) {
    IpPolicy p;
    p.kind = Kind::FixedAction;
    p.fixed_action = action;
    return p;
  }
  static IpPolicy scripted(std::vector<int> warmup, std::vector<int> repeat) {
    if (repeat.empty()) throw std::invalid_argument("scripted repeat block must be non-empty");
    IpPolicy p;
    p.kind = Kind::ScriptedSequence;
    p.warmup = std::move(warmup);
    p.repeat = std::move(repeat);
    return p;
  }

  // IP action at stage t >= 1. For FictitiousPlay, stage 1 falls back to the
  // configured initial action (FP needs one observation).
  int action_at(long long t, const Game& g, const EmpiricalState* state, int initial_ip,
                int last_ip) const {
    switch (kind) {
      case Kind::FixedAction:
        return fixed_action;
      case Kind::ScriptedSequence: {
        if (t <= (long long)warmup.size()) return warmup[t - 1];
        return repeat[(t - 1 - (long long)warmup.size()) % (long long)repeat.size()];
      }
      case Kind::FictitiousPlay: {
        if (t == 1 || state == nullptr) return initial_ip;
        std::vector<MixedStrategy> others(g.player_count());
        for (int i = 1; i < g.player_count(); ++i) others[i] = state->marginal(i);
        others[0] = MixedStrategy::point_mass(0, 0, g.action_count(0));  // unused
        return best_response(g, 0, others, ip_tie, last_ip);
      }
    }
    throw std::logic_error("unreachable");
  }
};

struct StageRecord {
  long long t;
  ActionProfile actions;
  std::vector<Rational> payoffs;
  Rational ip_running_avg;  // exact (sum of IP payoffs through t) / t
};

struct SimulationTrace {
  std::vector<StageRecord> stages;
  EmpiricalState final_state;
};

// Runs `init_state` for stage 1 and then T-1 alternating steps driven by the
// policy. For FixedAction and ScriptedSequence policies the IP component of
// `initial` is overridden by the policy's stage-1 action; the opponent
// components are always the literal stage-1 actions.
inline SimulationTrace simulate(const Game& g, const IpPolicy& policy, long long horizon,
                                TieRule tie, const ActionProfile& initial) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  ActionProfile first = initial;
  first[0] = policy.action_at(1, g, nullptr, initial[0], initial[0]);
  g.validate_profile(first);

  SimulationTrace trace;
  trace.stages.reserve((std::size_t)horizon);
  EmpiricalState state = init_state(g, first);
  Rational ip_sum = g.payoff_of(0, first);
  trace.stages.push_back({1, first, g.payoff(first), ip_sum});

  for (long long t = 2; t <= horizon; ++t) {
    int a0 = policy.action_at(t, g, &state, initial[0], state.last[0]);
    auto [profile, next] = alternating_step(g, state, a0, tie);
    state = std::move(next);
    ip_sum += g.payoff_of(0, profile);
    trace.stages.push_back({t, profile, g.payoff(profile), Rational(ip_sum) / t});
  }
  trace.final_state = std::move(state);
  return trace;
}

// Earliest time from which the realized profile is constant through the end
// of the trace, provided that tail spans at least `window` stages.
inline std::optional<std::pair<ActionProfile, long long>> detect_absorption(
    const SimulationTrace& trace, long long window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (trace.stages.empty()) return std::nullopt;
  const ActionProfile& tail = trace.stages.back().actions;
  long long first = trace.stages.back().t;
  for (auto it = trace.stages.rbegin(); it != trace.stages.rend(); ++it) {
    if (it->actions != tail) break;
    first = it->t;
  }
  if (trace.stages.back().t - first + 1 < window) return std::nullopt;
  return std::make_pair(tail, first);
}

}  // namespace ipfp
