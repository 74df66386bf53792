#include <catch_amalgamated.hpp>

#include <ipfp/oracle.hpp>
#include <ipfp/synthesis.hpp>

#include "tables.hpp"

using namespace ipfp;
using tables::table1;
using tables::table2;
using tables::table3;

TEST_CASE("build_lp reproduces the worked-example coefficients") {
  Game g2 = table2();
  Subgame sc(g2, 2);
  LinearProgram lp = build_lp(sc, {0, 2});  // (U, R)
  CHECK(lp.objective == std::vector<Rational>{6, 7, 5});
  REQUIRE(lp.rows.size() == 4);
  CHECK(lp.rows[0] == std::vector<Rational>{-1, 2, -1});
  CHECK(lp.rows[1] == std::vector<Rational>{1, 3, -2});
  CHECK(lp.rows[2] == std::vector<Rational>{-1, -7, -2});
  CHECK(lp.rows[3] == std::vector<Rational>{1, -6, -1});

  CHECK_THROWS_AS(build_lp(sc, {1, 1}), std::invalid_argument);  // (M, N) is no equilibrium
}

TEST_CASE("dominant-equilibrium subgame yields entrywise non-positive rows") {
  // Opponents' first actions strictly dominate under every IP action.
  Game g({{"a", "b"}, {"x", "y"}, {"u", "v"}},
         {
             tables::cell(5, 9, 9), tables::cell(1, 9, 1), tables::cell(2, 1, 9),
             tables::cell(1, 1, 1),
             tables::cell(4, 8, 8), tables::cell(1, 8, 2), tables::cell(3, 2, 8),
             tables::cell(1, 2, 2),
         });
  for (int y0 = 0; y0 < 2; ++y0) {
    LinearProgram lp = build_lp(Subgame(g, y0), {0, 0});
    for (const auto& row : lp.rows)
      for (const auto& v : row) CHECK(v <= 0);
  }
}

TEST_CASE("n-player synthesis on the benchmark games") {
  auto r2 = synthesize_n_player(table2());
  CHECK(r2.chosen_y0 == 2);  // C
  CHECK(r2.target_profile == OppProfile{0, 2});
  CHECK(r2.mix.probs == std::vector<Rational>{Rational(1, 9), Rational(3, 9), Rational(5, 9)});
  CHECK(r2.value == Rational(52, 9));
  CHECK(r2.baseline_pure.first == 2);
  CHECK(r2.baseline_pure.second == 5);

  auto r3 = synthesize_n_player(table3());
  CHECK(r3.chosen_y0 == 0);  // A
  CHECK(r3.target_profile == OppProfile{0, 2});
  CHECK(r3.mix.probs == std::vector<Rational>{Rational(0), Rational(1, 7), Rational(6, 7)});
  CHECK(r3.value == Rational(60, 7));
  CHECK(r3.baseline_pure.first == 0);
  CHECK(r3.baseline_pure.second == 5);
}

TEST_CASE("two-player synthesis on Table 1") {
  auto r = synthesize_two_player(table1());
  CHECK(r.two_player);
  CHECK(r.target_profile == OppProfile{1});  // column B
  CHECK(r.mix.probs == std::vector<Rational>{Rational(1, 6), Rational(5, 6)});
  CHECK(r.value == Rational(85, 6));
  CHECK(r.baseline_pure.first == 1);  // D
  CHECK(r.baseline_pure.second == 7);
}

TEST_CASE("two-player edge cases") {
  // One opponent action: unconstrained over the simplex.
  Game g({{"a", "b"}, {"x"}}, {tables::cell(3, 0), tables::cell(8, 0)});
  auto r = synthesize_two_player(g);
  CHECK(r.value == 8);
  CHECK(r.mix.probs == std::vector<Rational>{0, 1});

  // Dominated opponent columns are skipped as infeasible.
  Game dom({{"a"}, {"x", "y"}}, {tables::cell(1, 5), tables::cell(9, 1)});
  auto rd = synthesize_two_player(dom);
  CHECK(rd.per_candidate.at(1).feasible == false);
  CHECK(rd.target_profile == OppProfile{0});
  CHECK(rd.value == 1);
}

TEST_CASE("synthesis rejects structurally invalid games") {
  CHECK_THROWS_AS(synthesize_n_player(tables::matching_pennies_block()), StructureError);
}

TEST_CASE("pure baseline") {
  CHECK(pure_baseline(table2()) == std::pair<int, Rational>{2, Rational(5)});
  CHECK(pure_baseline(table3()) == std::pair<int, Rational>{0, Rational(5)});
  CHECK(pure_baseline(table1()) == std::pair<int, Rational>{1, Rational(7)});
}

TEST_CASE("trivial synthesis when the best Nash needs no mixing") {
  // Every LP row entrywise <= 0 and the objective peaks at the anchor.
  Game g({{"a", "b"}, {"x", "y"}, {"u", "v"}},
         {
             tables::cell(9, 9, 9), tables::cell(1, 9, 1), tables::cell(2, 1, 9),
             tables::cell(1, 1, 1),
             tables::cell(4, 8, 8), tables::cell(1, 8, 2), tables::cell(3, 2, 8),
             tables::cell(1, 2, 2),
         });
  auto r = synthesize_n_player(g);
  CHECK(r.chosen_y0 == 0);
  CHECK(r.mix.probs == std::vector<Rational>{1, 0});
  CHECK(r.value == 9);
  CHECK(r.value == r.baseline_pure.second);
}

TEST_CASE("scale covariance: rescaling one opponent leaves the choice unchanged") {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    Game g = oracle::random_validated_game(rng);
    auto base = synthesize_n_player(g);
    // Multiply P1's payoffs by 3/2 everywhere.
    std::vector<std::vector<Rational>> cells;
    std::vector<std::vector<std::string>> labels;
    for (int i = 0; i < 3; ++i) labels.push_back(g.action_labels(i));
    ActionProfile y(3, 0);
    while (true) {
      auto v = g.payoff(y);
      v[1] *= Rational(3, 2);
      cells.push_back(v);
      int i = 2;
      while (i >= 0) {
        if (++y[i] < g.action_count(i)) break;
        y[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
    Game scaled(labels, std::move(cells));
    auto res = synthesize_n_player(scaled);
    CHECK(res.chosen_y0 == base.chosen_y0);
    CHECK(res.target_profile == base.target_profile);
    CHECK(res.mix.probs == base.mix.probs);
    CHECK(res.value == base.value);
  }
}

TEST_CASE("oracle equivalence on the benchmarks and random games") {
  for (const Game& g : {table2(), table3()}) {
    auto fast = synthesize_n_player(g);
    auto slow = oracle::exhaustive_synthesis_oracle(g);
    CHECK(fast.chosen_y0 == slow.chosen_y0);
    CHECK(fast.value == slow.value);
  }
  std::mt19937 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    Game g = oracle::random_validated_game(rng);
    auto fast = synthesize_n_player(g);
    auto slow = oracle::exhaustive_synthesis_oracle(g);
    CHECK(fast.chosen_y0 == slow.chosen_y0);
    CHECK(fast.value == slow.value);
    CHECK(fast.value >= fast.baseline_pure.second);
  }
}
