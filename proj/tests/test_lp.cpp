#include <catch_amalgamated.hpp>

#include <ipfp/lp.hpp>
#include <ipfp/oracle.hpp>
#include <ipfp/synthesis.hpp>

#include "tables.hpp"

using namespace ipfp;

namespace {

// The reference three-player LP (subgame C of the first 3-player benchmark).
LinearProgram example_lp() {
  LinearProgram lp;
  lp.objective = {6, 7, 5};
  lp.rows = {{-1, 2, -1}, {1, 3, -2}, {-1, -7, -2}, {1, -6, -1}};
  lp.labels = {{1, 1}, {1, 2}, {2, 0}, {2, 1}};
  return lp;
}

}  // namespace

TEST_CASE("worked-example LP solves to (1/9, 3/9, 5/9) with value 52/9") {
  auto sol = solve_lp(example_lp());
  REQUIRE(sol.feasible);
  CHECK(sol.q == std::vector<Rational>{Rational(1, 9), Rational(3, 9), Rational(5, 9)});
  CHECK(sol.value == Rational(52, 9));
}

TEST_CASE("vertex oracle agrees on the worked example") {
  auto [best, all] = oracle::lp_vertex_oracle(example_lp());
  REQUIRE(best);
  CHECK(best->q == std::vector<Rational>{Rational(1, 9), Rational(3, 9), Rational(5, 9)});
  CHECK(best->value == Rational(52, 9));
}

TEST_CASE("two-player column-B LP has feasible interval [1/6, 7/10]") {
  Game g1 = tables::table1();
  auto result = synthesize_two_player(g1);
  const auto& cand_b = result.per_candidate.at(1);
  REQUIRE(cand_b.feasible);

  LinearProgram lp;
  lp.objective = {Rational(10), Rational(15)};  // IP payoffs in column B
  lp.rows = {{Rational(3), Rational(-7)},       // L vs B
             {Rational(-5), Rational(1)}};      // R vs B
  auto [best, all] = oracle::lp_vertex_oracle(lp);
  std::set<Rational> p_u;
  for (const auto& v : all) p_u.insert(v.q[0]);
  CHECK(p_u == std::set<Rational>{Rational(1, 6), Rational(7, 10)});
  REQUIRE(best);
  CHECK(best->q[0] == Rational(1, 6));
  CHECK(best->value == Rational(85, 6));
  CHECK(solve_lp(lp).value == Rational(85, 6));
}

TEST_CASE("flat objective with vacuous rows returns the lexicographically smallest vertex") {
  LinearProgram lp;
  lp.objective = {3, 3, 3};
  lp.rows = {{-1, 0, -2}};
  auto sol = solve_lp(lp);
  REQUIRE(sol.feasible);
  CHECK(sol.value == 3);
  CHECK(sol.q == std::vector<Rational>{0, 0, 1});
}

TEST_CASE("infeasible LPs are reported, not solved") {
  LinearProgram lp;
  lp.objective = {1, 1};
  lp.rows = {{Rational(1), Rational(1)}};  // q1 + q2 <= 0 contradicts the simplex
  auto sol = solve_lp(lp);
  CHECK(!sol.feasible);
}

TEST_CASE("single-column LP") {
  LinearProgram lp;
  lp.objective = {Rational(7, 3)};
  auto sol = solve_lp(lp);
  REQUIRE(sol.feasible);
  CHECK(sol.q == std::vector<Rational>{1});
  CHECK(sol.value == Rational(7, 3));
}

TEST_CASE("simplex value equals vertex-oracle value on generated LPs") {
  // All subgame LPs of the two benchmark 3-player games...
  for (const Game& g : {tables::table2(), tables::table3()}) {
    for (int y0 = 0; y0 < 3; ++y0) {
      Subgame sg(g, y0);
      LinearProgram lp = build_lp(sg, pure_nash(sg).front());
      auto sol = solve_lp(lp);
      auto [best, all] = oracle::lp_vertex_oracle(lp);
      REQUIRE(sol.feasible);
      REQUIRE(best);
      CHECK(sol.value == best->value);
    }
  }
  // ...and a batch of random validated games.
  std::mt19937 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    Game g = oracle::random_validated_game(rng);
    for (int y0 = 0; y0 < 3; ++y0) {
      Subgame sg(g, y0);
      LinearProgram lp = build_lp(sg, pure_nash(sg).front());
      auto sol = solve_lp(lp);
      auto [best, all] = oracle::lp_vertex_oracle(lp);
      REQUIRE(sol.feasible);
      REQUIRE(best);
      CHECK(sol.value == best->value);
      CHECK(lp.satisfies(sol.q));
    }
  }
}
