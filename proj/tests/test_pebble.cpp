#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "xorwl/error.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/position.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/rng.hpp"

using namespace xorwl;

TEST_CASE("position space numbers every position once") {
  for (std::uint32_t n = 0; n <= 6; ++n) {
    for (std::uint32_t k = 0; k <= 4; ++k) {
      PositionSpace sp(n, k, 1'000'000);
      std::vector<Assignment> all;
      Assignment cur;
      oracle::all_positions(n, std::min(k, n), 0, cur, all);
      REQUIRE(sp.size() == all.size());
      std::set<std::size_t> seen;
      for (const auto& a : all) {
        auto p = Position::from_assignment(a);
        auto idx = sp.index(p);
        CHECK(idx < sp.size());
        seen.insert(idx);
        CHECK(sp.decode(idx) == p);
        CHECK(sp.size_of(idx) == p.size());
      }
      CHECK(seen.size() == all.size());
    }
  }
}

TEST_CASE("position count saturates") {
  CHECK(PositionSpace::count(4, 2, 1000) == 1 + 8 + 24);
  CHECK(PositionSpace::count(200, 8, 1000) == 1001);
  CHECK_THROWS_AS(PositionSpace(200, 8, 1000), CapacityError);
}

TEST_CASE("pyramid P1_1 needs exactly three rounds with three pebbles") {
  auto f = dag_to_xor(build_pyramid(1, 1));
  CHECK(pebble_value(f, 3) == std::optional<std::uint32_t>(3));
  CHECK_FALSE(pebble_value(f, 2).has_value());
  CHECK(oracle::pebble_value(f, 3) == std::optional<std::uint32_t>(3));
}

TEST_CASE("trivial values") {
  XorFormula contradiction(1);
  contradiction.add_clause({0, 0}, 1);
  CHECK(pebble_value(contradiction, 1) == std::optional<std::uint32_t>(0));

  XorFormula unit(1);
  unit.add_clause({0}, 0);
  unit.add_clause({0}, 1);
  CHECK(pebble_value(unit, 1) == std::optional<std::uint32_t>(1));

  XorFormula sat(2);
  sat.add_clause({0, 1}, 1);
  CHECK_FALSE(pebble_value(sat, 2).has_value());
}

TEST_CASE("solver agrees with the map-based oracle on every position") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = 1 + static_cast<std::uint32_t>(rng.below(5));
    const auto k = 1 + static_cast<std::uint32_t>(rng.below(3));
    auto f = oracle::random_formula(rng, n, 1 + static_cast<std::uint32_t>(rng.below(6)), 3);
    auto w = solve_pebble_game(f, k);
    auto ref = oracle::pebble_levels(f, k);
    for (std::size_t i = 0; i < w.space.size(); ++i) {
      auto a = w.space.decode(i).to_assignment();
      auto it = ref.find(a);
      const int expect = it == ref.end() ? kNoWinLevel : it->second;
      CHECK(w.level[i] == expect);
    }
  }
}

TEST_CASE("levels are monotone under adding pebbles") {
  // A superset of a position is never harder for Player 1, as long as it
  // still fits on the board.
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = oracle::random_formula(rng, 5, 5, 3);
    auto w = solve_pebble_game(f, 3);
    for (std::size_t i = 0; i < w.space.size(); ++i) {
      auto p = w.space.decode(i);
      if (p.size() >= 3) continue;
      for (Var x = 0; x < 5; ++x) {
        auto a = p.to_assignment();
        if (a.count(x)) continue;
        for (std::uint8_t b = 0; b < 2; ++b) {
          auto q = a;
          q[x] = b;
          CHECK(w.level_of(q) <= w.level[i]);
        }
      }
    }
  }
}

TEST_CASE("more pebbles never hurt") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = oracle::random_formula(rng, 5, 4, 3);
    auto v2 = pebble_value(f, 2);
    auto v3 = pebble_value(f, 3);
    if (v2) {
      REQUIRE(v3.has_value());
      CHECK(*v3 <= *v2);
    }
    // With n pebbles Player 1 can ask for every variable.
    CHECK(pebble_value(f, f.num_vars).has_value() == !oracle::brute_sat(f));
  }
}

TEST_CASE("workers give identical levels") {
  auto f = dag_to_xor(build_pyramid(2, 2));
  PebbleOptions one, four;
  four.workers = 4;
  CHECK(solve_pebble_game(f, 3, one).level == solve_pebble_game(f, 3, four).level);
}

TEST_CASE("position guard") {
  auto f = dag_to_xor(build_pyramid(2, 3));
  PebbleOptions o;
  o.max_positions = 50;
  CHECK_THROWS_AS(solve_pebble_game(f, 3, o), CapacityError);
}

TEST_CASE("solver result json") {
  CHECK(solver_result_json(3, 27, 0) ==
        "{\"value\":\"rounds\",\"r\":3,\"positions_explored\":27,\"wallclock_ms\":0.0}\n");
  CHECK(solver_result_json(std::nullopt, 5, 0) ==
        "{\"value\":\"nowin\",\"r\":null,\"positions_explored\":5,\"wallclock_ms\":0.0}\n");
}
