#pragma once

#include "fictitious_play.hpp"
#include "game.hpp"
#include "synthesis.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipfp {

struct TrajectoryPlan {
  std::vector<int> warmup;  // X': anchor action repeated tau_prime times
  std::vector<int> block;   // X*: repeated forever after the warmup
  long long tau_star = 0;
  long long tau_zero = 0;
  long long tau_prime = 0;
  long long epsilon = 0;  // tau_prime - tau_star
  SynthesisResult source;
  LinearProgram lp;  // rows of the chosen subgame LP, for the monitor
  std::vector<std::string> reorder_notes;

  bool anchored() const { return !source.two_player; }
};

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest block length realizing the mix with integer action counts: the
// LCM of the lowest-terms denominators of the nonzero entries.
inline long long tau_star(const MixedStrategy& mix) {
  mix.validate();
  Int l = 1;
  for (const auto& p : mix.probs)
    if (p != 0) l = boost::multiprecision::lcm(l, denominator(p));
  return (long long)l;
}

// Worst-case absorption time: simulate the anchor action from every initial
// opponent profile and take the latest first-lock stage. Lock-in can be slow
// when an opponent must outweigh a long stretch of stale observations, so the
// horizon escalates; the hard cap turns a (theoretically impossible)
// non-absorbing run into a diagnosable error.
inline long long tau_zero(const Subgame& sg, const OppProfile& target, TieRule tie) {
  const Game& g = *sg.base;
  const auto initials = all_opponent_profiles(g);
  constexpr long long kCap = 200000;
  long long worst = 1;
  for (const auto& init : initials) {
    long long horizon = std::max<long long>(16, 10 * (long long)initials.size());
    long long first = -1;
    while (true) {
      auto trace = simulate(g, IpPolicy::fixed(sg.fixed_ip_action), horizon, tie,
                            full_profile(sg.fixed_ip_action, init));
      first = -1;
      for (auto it = trace.stages.rbegin(); it != trace.stages.rend(); ++it) {
        OppProfile opp(it->actions.begin() + 1, it->actions.end());
        if (opp != target) break;
        first = it->t;
      }
      // Accept only a lock with a comfortable constant tail behind it.
      if (first > 0 && first <= horizon / 2) break;
      if (horizon >= kCap)
        throw PlanError("fixed-action play did not absorb at the target within " +
                        std::to_string(kCap) + " stages (tie-rule mismatch or invalid subgame?)");
      horizon = std::min(horizon * 4, kCap);
    }
    worst = std::max(worst, first);
  }
  return worst;
}

struct MonitorViolation {
  long long step;
  std::string what;
};

struct MonitorReport {
  bool ok = true;
  std::vector<MonitorViolation> violations;
};

namespace detail {

// Frequency and LP-row checks at one step of the open-loop walk, with the
// IP's counts given explicitly. Returns a violation message or empty.
inline std::string check_step(const TrajectoryPlan& plan, const Game& g,
                              const std::vector<long long>& counts, long long step) {
  const auto& q_star = plan.source.mix.probs;
  const int anchor = plan.source.chosen_y0;
  for (int k = 0; k < (int)q_star.size(); ++k) {
    Rational freq(counts[k], step);
    if (k == anchor) {
      if (freq < q_star[k])
        return "freq(" + g.action_label(0, k) + ") = " + to_string(freq) +
               " fell below its quota " + to_string(q_star[k]);
    } else if (q_star[k] != 0 && freq > q_star[k]) {
      return "freq(" + g.action_label(0, k) + ") = " + to_string(freq) +
             " exceeded its quota " + to_string(q_star[k]);
    }
  }
  for (std::size_t r = 0; r < plan.lp.rows.size(); ++r) {
    Rational v = 0;
    for (int k = 0; k < (int)q_star.size(); ++k)
      if (counts[k] != 0) v += plan.lp.rows[r][k] * Rational(counts[k], step);
    if (v > 0)
      return "LP row " + std::to_string(r) + " (opponent " +
             std::to_string(plan.lp.labels[r].opponent) + ", deviation " +
             g.action_label(plan.lp.labels[r].opponent, plan.lp.labels[r].deviation) +
             ") evaluates to " + to_string(v) + " > 0";
  }
  return {};
}

}  // namespace detail

// Open-loop walk of X' then `reps` repetitions of X*, asserting at every
// step that the anchor frequency stays at or above its quota, every other
// support frequency stays at or below its quota, and every LP row is <= 0.
inline MonitorReport monitor_constraints(const Game& g, const TrajectoryPlan& plan,
                                         long long reps) {
  if (!plan.anchored())
    throw std::invalid_argument("constraint monitor requires an anchored (n-player) plan");
  MonitorReport report;
  std::vector<long long> counts(g.action_count(0), 0);
  long long step = 0;
  auto play = [&](int action) {
    ++step;
    ++counts[action];
    auto msg = detail::check_step(plan, g, counts, step);
    if (!msg.empty()) {
      report.ok = false;
      report.violations.push_back({step, msg});
    }
  };
  for (int a : plan.warmup) play(a);
  for (long long p = 0; p < reps; ++p)
    for (int a : plan.block) play(a);
  return report;
}

namespace detail {

// Feasibility of placing `action` at block position `pos` (0-based), checked
// for every repetition 0..reps-1 using the known full-block composition.
inline bool placement_ok(const Game& g, const TrajectoryPlan& plan,
                         const std::vector<long long>& full_counts,
                         const std::vector<long long>& prefix_counts, long long pos,
                         long long reps) {
  const long long w = plan.tau_prime;
  const int anchor = plan.source.chosen_y0;
  std::vector<long long> counts(prefix_counts.size());
  for (long long p = 0; p < reps; ++p) {
    long long step = w + p * plan.tau_star + pos + 1;
    for (std::size_t k = 0; k < counts.size(); ++k)
      counts[k] = ((int)k == anchor ? w : 0) + p * full_counts[k] + prefix_counts[k];
    if (!check_step(plan, g, counts, step).empty()) return false;
  }
  return true;
}

}  // namespace detail

// Compiles a synthesis result into warmup + repeating block. The block takes
// the anchor-first-then-ascending-index order; if the open-loop monitor
// rejects that order, the block is rebuilt greedily (lowest feasible index at
// each position) and the reorders are recorded.
inline TrajectoryPlan build_plan(const Game& g, const SynthesisResult& synth, TieRule tie,
                                 long long check_reps = 50) {
  TrajectoryPlan plan;
  plan.source = synth;
  const auto& q = synth.mix.probs;
  plan.tau_star = tau_star(synth.mix);

  if (synth.two_player) {
    // No subgame convergence phase: the block cycle itself locks the
    // opponent, so the warmup is empty. Absorption happens by stage 2.
    plan.tau_zero = 2;
    plan.tau_prime = 0;
    plan.epsilon = plan.tau_prime - plan.tau_star;
    for (int k = 0; k < (int)q.size(); ++k) {
      Int reps = numerator(q[k]) * plan.tau_star / denominator(q[k]);
      for (Int i = 0; i < reps; ++i) plan.block.push_back(k);
    }
    return plan;
  }

  const int anchor = synth.chosen_y0;
  Subgame sg(g, anchor);
  plan.lp = build_lp(sg, synth.target_profile);
  plan.tau_zero = tau_zero(sg, synth.target_profile, tie);
  plan.tau_prime = std::max(plan.tau_zero, plan.tau_star);
  plan.epsilon = plan.tau_prime - plan.tau_star;
  plan.warmup.assign(plan.tau_prime, anchor);

  std::vector<long long> block_counts(q.size(), 0);
  for (int k = 0; k < (int)q.size(); ++k)
    block_counts[k] = (long long)(numerator(q[k]) * plan.tau_star / denominator(q[k]));

  // Canonical order: anchor first (when in the support), then the remaining
  // support actions in ascending index order.
  for (long long i = 0; i < block_counts[anchor]; ++i) plan.block.push_back(anchor);
  for (int k = 0; k < (int)q.size(); ++k) {
    if (k == anchor) continue;
    for (long long i = 0; i < block_counts[k]; ++i) plan.block.push_back(k);
  }

  if (monitor_constraints(g, plan, check_reps).ok) return plan;

  // Greedy repair against the known block composition.
  std::vector<int> repaired;
  std::vector<long long> remaining = block_counts;
  std::vector<long long> prefix(q.size(), 0);
  for (long long pos = 0; pos < plan.tau_star; ++pos) {
    int chosen = -1;
    for (int k = 0; k < (int)q.size(); ++k) {
      if (remaining[k] == 0) continue;
      ++prefix[k];
      if (detail::placement_ok(g, plan, block_counts, prefix, pos, check_reps)) {
        chosen = k;
        break;
      }
      --prefix[k];
    }
    if (chosen < 0)
      throw PlanError("no constraint-satisfying block order exists at position " +
                      std::to_string(pos));
    repaired.push_back(chosen);
    --remaining[chosen];
    if (chosen != plan.block[pos])
      plan.reorder_notes.push_back("position " + std::to_string(pos) + ": " +
                                   g.action_label(0, plan.block[pos]) + " -> " +
                                   g.action_label(0, chosen));
  }
  plan.block = repaired;
  auto recheck = monitor_constraints(g, plan, check_reps);
  if (!recheck.ok)
    throw PlanError("greedy reorder still violates constraints: " +
                    recheck.violations.front().what);
  return plan;
}

struct VerificationReport {
  bool held = false;
  std::optional<MonitorViolation> first_violation;
  long long absorption_time = -1;
  std::vector<Rational> payoff_after;  // running average at each block boundary
  Rational limit_gap;                  // |final running average - LP value|
};

// Closed-loop ground truth: play X' then p repetitions of X* against live FP
// opponents and check that they lock at the target profile in time, never
// leave it, and that every post-absorption repetition pays tau_star * value.
inline VerificationReport verify_plan(const Game& g, const TrajectoryPlan& plan, long long reps,
                                      TieRule tie, const ActionProfile& initial) {
  if (reps < 1) throw std::invalid_argument("need at least one repetition");
  VerificationReport report;
  const long long total = plan.tau_prime + reps * plan.tau_star;
  auto trace =
      simulate(g, IpPolicy::scripted(plan.warmup, plan.block), total, tie, initial);

  const OppProfile& target = plan.source.target_profile;
  long long lock = -1;
  for (auto it = trace.stages.rbegin(); it != trace.stages.rend(); ++it) {
    OppProfile opp(it->actions.begin() + 1, it->actions.end());
    if (opp != target) break;
    lock = it->t;
  }
  report.absorption_time = lock;
  report.held = true;
  if (lock < 0 || lock > std::max(plan.tau_zero, (long long)2)) {
    report.held = false;
    report.first_violation = {lock < 0 ? total : lock,
                              "opponents not locked at the target profile by the bound"};
  }

  const Rational& value = plan.source.value;
  Rational warmup_sum = 0;
  for (long long t = 1; t <= plan.tau_prime; ++t)
    warmup_sum += trace.stages[t - 1].payoffs[0];
  for (long long p = 1; p <= reps; ++p) {
    long long rep_end = plan.tau_prime + p * plan.tau_star;
    report.payoff_after.push_back(trace.stages[rep_end - 1].ip_running_avg);
  }
  for (long long p = 1; p <= reps && report.held; ++p) {
    long long rep_begin = plan.tau_prime + (p - 1) * plan.tau_star + 1;
    long long rep_end = plan.tau_prime + p * plan.tau_star;
    if (lock < 0 || rep_begin <= lock) continue;  // transient repetition
    Rational rep_sum = 0;
    for (long long t = rep_begin; t <= rep_end; ++t) rep_sum += trace.stages[t - 1].payoffs[0];
    if (rep_sum != value * plan.tau_star) {
      report.held = false;
      report.first_violation = {rep_begin, "repetition " + std::to_string(p) +
                                               " pays " + to_string(rep_sum) +
                                               ", expected " + to_string(value * plan.tau_star)};
    }
    // Post-absorption closed form for the running average.
    if (plan.tau_prime > 0 && report.held) {
      Rational expected =
          (warmup_sum + Rational(p) * plan.tau_star * value) / Rational(plan.tau_prime + p * plan.tau_star);
      if (trace.stages[rep_end - 1].ip_running_avg != expected) {
        report.held = false;
        report.first_violation = {rep_end, "running average mismatch at repetition " +
                                               std::to_string(p)};
      }
    }
  }
  report.limit_gap = trace.stages.back().ip_running_avg - value;
  if (report.limit_gap < 0) report.limit_gap = -report.limit_gap;
  return report;
}

}  // namespace ipfp
