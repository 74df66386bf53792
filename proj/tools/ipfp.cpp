// Command-line front end: validate | simulate | synthesize | plan | verify.
//
// Exit codes: 0 ok, 1 parse/config error, 2 validation failure,
// 3 planning error, 4 oracle mismatch.

#include <ipfp/ipfp.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ipfp;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPlanning = 3;
constexpr int kExitOracle = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string game_path;
  std::string tie_rule;  // empty = default: inertia (n-player), lowest (2-player)
  std::string init_labels;  // comma-separated action labels, one per player
  long long horizon = 1000;
  long long reps = 50;
  std::string out_path;
  int precision = 6;
  std::string policy = "fp";  // simulate only: fp | fixed:<label>
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("game", cfg.game_path, "game file (JSON)")->required();
  cmd->add_option("--tie-rule", cfg.tie_rule, "opponent tie rule: inertia | lowest")
      ->check(CLI::IsMember({"inertia", "lowest"}));
  cmd->add_option("--init", cfg.init_labels,
                  "initial stage-1 actions as comma-separated labels, one per player");
  cmd->add_option("--out", cfg.out_path, "write the main output to this file instead of stdout");
  cmd->add_option("--precision", cfg.precision, "significant digits for decimal renderings")
      ->check(CLI::Range(1, 50));
}

TieRule tie_for(const Game& g, const std::string& s) {
  if (s == "lowest") return TieRule::LowestIndex;
  if (s == "inertia") return TieRule::Inertia;
  return g.player_count() == 2 ? TieRule::LowestIndex : TieRule::Inertia;
}

ActionProfile parse_init(const Game& g, const std::string& labels) {
  if (labels.empty()) return ActionProfile(g.player_count(), 0);
  std::vector<std::string> parts;
  std::stringstream ss(labels);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if ((int)parts.size() != g.player_count())
    throw ConfigError("--init needs " + std::to_string(g.player_count()) +
                      " labels, got " + std::to_string(parts.size()));
  ActionProfile y(g.player_count());
  for (int i = 0; i < g.player_count(); ++i) y[i] = g.action_index(i, parts[i]);
  return y;
}

std::string profile_labels(const Game& g, const ActionProfile& y) {
  std::string s = "(";
  for (int i = 0; i < g.player_count(); ++i) s += (i ? "," : "") + g.action_label(i, y[i]);
  return s + ")";
}

std::string show(const Rational& r, int precision) {
  if (denominator(r) == 1) return to_string(r);
  return to_string(r) + " ~ " + to_decimal(r, precision);
}

// Stream selector: --out file when given, stdout otherwise.
struct Output {
  std::ofstream file;
  bool use_file = false;
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file: " + path);
      use_file = true;
    }
  }
  std::ostream& stream() { return use_file ? file : std::cout; }
};

void print_findings(const ValidationReport& report) {
  for (const auto& f : report.findings) {
    std::cout << (f.severity == Finding::Severity::Failure ? "FAILURE" : "WARNING") << " ["
              << f.check << "] " << f.location << ": " << f.message << "\n";
  }
}

// --- validate -------------------------------------------------------------

int cmd_validate(const RunConfig& cfg) {
  GameDocument doc = load_game(cfg.game_path);
  const Game& g = doc.game;
  std::cout << "game: " << doc.title.value_or(cfg.game_path) << " (" << g.player_count()
            << " players)\n";
  bool failed = false;
  auto degen = check_nondegenerate(g);
  print_findings(degen);
  for (int y0 = 0; y0 < g.action_count(0); ++y0) {
    auto rep = check_ordinal_potential(Subgame(g, y0));
    print_findings(rep);
    if (!rep.passed()) failed = true;
  }
  if (failed) {
    std::cout << "validation: FAILED\n";
    return kExitValidation;
  }
  std::cout << "validation: OK (" << degen.findings.size() << " warning(s))\n";
  return kExitOk;
}

// --- simulate -------------------------------------------------------------

IpPolicy parse_policy(const Game& g, const std::string& text, TieRule tie) {
  if (text == "fp") return IpPolicy::fictitious_play(tie);
  if (text.rfind("fixed:", 0) == 0)
    return IpPolicy::fixed(g.action_index(0, text.substr(6)));
  throw ConfigError("unknown policy '" + text + "' (expected fp or fixed:<label>)");
}

json stage_record(const Game& g, const StageRecord& rec, int precision) {
  json line;
  line["t"] = rec.t;
  line["actions"] = json::array();
  for (int i = 0; i < g.player_count(); ++i)
    line["actions"].push_back(g.action_label(i, rec.actions[i]));
  line["payoffs"] = json::array();
  for (const auto& v : rec.payoffs) line["payoffs"].push_back(to_string(v));
  line["ip_avg"] = to_string(rec.ip_running_avg);
  line["ip_avg_decimal"] = to_decimal(rec.ip_running_avg, precision);
  return line;
}

int cmd_simulate(const RunConfig& cfg) {
  GameDocument doc = load_game(cfg.game_path);
  const Game& g = doc.game;
  TieRule tie = tie_for(g, cfg.tie_rule);
  IpPolicy policy = parse_policy(g, cfg.policy, tie);
  ActionProfile init = parse_init(g, cfg.init_labels);
  if (cfg.horizon < 1) throw ConfigError("--horizon must be >= 1");

  auto trace = simulate(g, policy, cfg.horizon, tie, init);

  Output out(cfg.out_path);
  for (const auto& rec : trace.stages) out.stream() << stage_record(g, rec, cfg.precision) << "\n";

  // Keep the summary off the record stream when both go to stdout.
  std::ostream& summary = out.use_file ? std::cout : std::cerr;
  auto abs = detect_absorption(trace, std::min<long long>(50, (cfg.horizon + 1) / 2));
  if (abs) {
    summary << "absorbed at " << profile_labels(g, abs->first) << " from stage " << abs->second
            << "\n";
  } else {
    summary << "no absorption detected within " << cfg.horizon << " stages\n";
  }
  summary << "IP average after " << cfg.horizon
          << " stages: " << show(trace.stages.back().ip_running_avg, cfg.precision) << "\n";
  return kExitOk;
}

// --- synthesize -----------------------------------------------------------

json synthesis_json(const Game& g, const SynthesisResult& r, int precision) {
  json out;
  out["mode"] = r.two_player ? "two-player" : "n-player";
  if (!r.two_player) out["anchor"] = g.action_label(0, r.chosen_y0);
  out["target"] = json::array();
  for (int j = 0; j < (int)r.target_profile.size(); ++j)
    out["target"].push_back(g.action_label(j + 1, r.target_profile[j]));
  out["mix"] = json::object();
  for (int k = 0; k < g.action_count(0); ++k)
    out["mix"][g.action_label(0, k)] = to_string(r.mix.probs[k]);
  out["value"] = to_string(r.value);
  out["value_decimal"] = to_decimal(r.value, precision);
  out["baseline_pure"] = {{"action", g.action_label(0, r.baseline_pure.first)},
                          {"value", to_string(r.baseline_pure.second)}};
  out["candidates"] = json::array();
  for (const auto& c : r.per_candidate) {
    json cand;
    cand["index"] =
        r.two_player ? g.action_label(1, c.index) : g.action_label(0, c.index);
    cand["feasible"] = c.feasible;
    if (c.feasible) {
      cand["value"] = to_string(c.lp_value);
      cand["mix"] = json::array();
      for (const auto& q : c.lp_solution) cand["mix"].push_back(to_string(q));
    }
    out["candidates"].push_back(std::move(cand));
  }
  return out;
}

void print_synthesis(std::ostream& os, const Game& g, const SynthesisResult& r, int precision) {
  os << "== synthesis ==\n";
  if (!r.two_player) os << "anchor y0*: " << g.action_label(0, r.chosen_y0) << "\n";
  os << "target opponent profile: (";
  for (int j = 0; j < (int)r.target_profile.size(); ++j)
    os << (j ? "," : "") << g.action_label(j + 1, r.target_profile[j]);
  os << ")\n";
  os << "mix z0*:";
  for (int k = 0; k < g.action_count(0); ++k)
    os << " " << g.action_label(0, k) << "=" << to_string(r.mix.probs[k]);
  os << "\n";
  os << "value: " << show(r.value, precision) << "\n";
  os << "pure baseline: " << g.action_label(0, r.baseline_pure.first) << " -> "
     << show(r.baseline_pure.second, precision) << "\n";
  os << "candidates:\n";
  for (const auto& c : r.per_candidate) {
    os << "  " << (r.two_player ? g.action_label(1, c.index) : g.action_label(0, c.index))
       << ": ";
    if (!c.feasible) {
      os << "infeasible\n";
      continue;
    }
    os << "value " << show(c.lp_value, precision) << "\n";
  }
  os << "machine-readable:\n" << synthesis_json(g, r, precision).dump() << "\n";
}

SynthesisResult synthesize_checked(const Game& g) {
  try {
    return synthesize(g);
  } catch (const StructureError& e) {
    print_findings(e.report);
    throw;
  }
}

int cmd_synthesize(const RunConfig& cfg) {
  GameDocument doc = load_game(cfg.game_path);
  const Game& g = doc.game;
  SynthesisResult r = synthesize_checked(g);
  Output out(cfg.out_path);
  print_synthesis(out.stream(), g, r, cfg.precision);
  return kExitOk;
}

// --- plan -----------------------------------------------------------------

std::string action_run(const Game& g, const std::vector<int>& seq) {
  if (seq.empty()) return "(empty)";
  std::string s = "(";
  for (std::size_t i = 0; i < seq.size(); ++i)
    s += (i ? "," : "") + g.action_label(0, seq[i]);
  return s + ")";
}

int cmd_plan(const RunConfig& cfg) {
  GameDocument doc = load_game(cfg.game_path);
  const Game& g = doc.game;
  TieRule tie = tie_for(g, cfg.tie_rule);
  if (cfg.reps < 1) throw ConfigError("--reps must be >= 1");

  SynthesisResult synth = synthesize_checked(g);
  TrajectoryPlan plan = build_plan(g, synth, tie);

  Output out(cfg.out_path);
  std::ostream& os = out.stream();
  print_synthesis(os, g, synth, cfg.precision);
  os << "== plan ==\n";
  os << "tau*: " << plan.tau_star << "  tau0: " << plan.tau_zero << "  tau': " << plan.tau_prime
     << "  epsilon: " << plan.epsilon << "\n";
  os << "warmup X': " << action_run(g, plan.warmup) << "\n";
  os << "block X*: " << action_run(g, plan.block) << "\n";
  for (const auto& note : plan.reorder_notes) os << "reorder: " << note << "\n";
  if (plan.anchored()) {
    auto monitor = monitor_constraints(g, plan, cfg.reps);
    os << "monitor over " << cfg.reps << " repetition(s): " << (monitor.ok ? "clean" : "VIOLATED")
       << "\n";
    if (!monitor.ok) {
      for (const auto& v : monitor.violations)
        os << "  step " << v.step << ": " << v.what << "\n";
      std::cerr << "planning error: the monitor rejected the plan\n";
      return kExitPlanning;
    }
  }

  ActionProfile init = parse_init(g, cfg.init_labels);
  auto rep = verify_plan(g, plan, cfg.reps, tie, init);
  os << "== verification ==\n";
  os << "initial profile: " << profile_labels(g, init) << "\n";
  os << "held: " << (rep.held ? "true" : "false") << "\n";
  os << "absorption time: " << rep.absorption_time << "\n";
  os << "running average after " << cfg.reps
     << " repetition(s): " << show(rep.payoff_after.back(), cfg.precision) << "\n";
  os << "gap to value: " << show(rep.limit_gap, cfg.precision) << "\n";
  if (!rep.held) {
    if (rep.first_violation)
      std::cerr << "planning error at step " << rep.first_violation->step << ": "
                << rep.first_violation->what << "\n";
    return kExitPlanning;
  }
  return kExitOk;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
  GameDocument doc = load_game(cfg.game_path);
  const Game& g = doc.game;
  Output out(cfg.out_path);
  std::ostream& os = out.stream();
  int mismatches = 0;
  long long checked = 0;

  auto probe_lp = [&](const std::string& where, const LinearProgram& lp) {
    auto fast = solve_lp(lp);
    auto [best, all] = oracle::lp_vertex_oracle(lp);
    ++checked;
    if (fast.feasible != (bool)best) {
      os << "MISMATCH " << where << ": feasibility " << fast.feasible << " vs "
         << (bool)best << "\n";
      ++mismatches;
      return;
    }
    if (best && fast.value != best->value) {
      os << "MISMATCH " << where << ": simplex value " << to_string(fast.value)
         << " vs vertex-oracle value " << to_string(best->value) << "\n";
      ++mismatches;
    }
  };

  if (g.player_count() == 2) {
    auto r = synthesize_two_player(g);
    for (const auto& c : r.per_candidate)
      probe_lp("column " + g.action_label(1, c.index), c.lp);
  } else {
    for (int y0 = 0; y0 < g.action_count(0); ++y0) {
      Subgame sg(g, y0);
      auto eqs = pure_nash(sg);
      if (eqs.size() != 1) {
        os << "MISMATCH subgame " << g.action_label(0, y0) << ": " << eqs.size()
           << " pure Nash profiles (expected 1)\n";
        ++mismatches;
        continue;
      }
      probe_lp("subgame " + g.action_label(0, y0), build_lp(sg, eqs.front()));
    }
    if (mismatches == 0) {
      auto fast = synthesize_n_player(g);
      auto slow = oracle::exhaustive_synthesis_oracle(g);
      ++checked;
      if (fast.chosen_y0 != slow.chosen_y0 || fast.value != slow.value) {
        os << "MISMATCH synthesis: fast (" << g.action_label(0, fast.chosen_y0) << ", "
           << to_string(fast.value) << ") vs oracle (" << g.action_label(0, slow.chosen_y0)
           << ", " << to_string(slow.value) << ")\n";
        ++mismatches;
      }
    }
  }

  if (mismatches > 0) {
    os << "oracle cross-check: " << mismatches << " mismatch(es)\n";
    return kExitOracle;
  }
  os << "oracle cross-check: " << checked << " comparison(s), all agree exactly\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fictitious-play simulation, strategy synthesis and trajectory planning\n"
               "for finite normal-form games with exact rational arithmetic."};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate = app.add_subcommand("validate", "structural checks on a game file");
  add_common_flags(validate, cfg);

  auto* simulate_cmd = app.add_subcommand("simulate", "run alternating fictitious play");
  add_common_flags(simulate_cmd, cfg);
  simulate_cmd->add_option("--policy", cfg.policy, "IP policy: fp | fixed:<label>");
  simulate_cmd->add_option("--horizon", cfg.horizon, "number of stages");

  auto* synthesize_cmd =
      app.add_subcommand("synthesize", "compute the optimal convergence-based mixed strategy");
  add_common_flags(synthesize_cmd, cfg);

  auto* plan = app.add_subcommand("plan", "compile and verify a pure-action trajectory");
  add_common_flags(plan, cfg);
  plan->add_option("--reps", cfg.reps, "block repetitions to monitor and verify");

  auto* verify = app.add_subcommand("verify", "cross-check fast paths against brute-force oracles");
  add_common_flags(verify, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(cfg);
    if (app.got_subcommand(simulate_cmd)) return cmd_simulate(cfg);
    if (app.got_subcommand(synthesize_cmd)) return cmd_synthesize(cfg);
    if (app.got_subcommand(plan)) return cmd_plan(cfg);
    if (app.got_subcommand(verify)) return cmd_verify(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StructureError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const PlanError& e) {
    std::cerr << "planning error: " << e.what() << "\n";
    return kExitPlanning;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
