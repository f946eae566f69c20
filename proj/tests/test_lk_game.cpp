#include "doctest.h"

#include "oracles.hpp"
#include "xorwl/error.hpp"
#include "xorwl/lk_game.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/rng.hpp"
#include "xorwl/structure.hpp"

using namespace xorwl;

namespace {

RelStructure cycle(std::uint32_t n) {
  RelStructure s;
  for (std::uint32_t i = 0; i < n; ++i) s.domain.push_back("v" + std::to_string(i));
  Relation e{2, {}};
  for (Elem i = 0; i < n; ++i) {
    e.tuples.push_back({i, (i + 1) % n});
    e.tuples.push_back({(i + 1) % n, i});
  }
  s.relations["E"] = e;
  s.canonicalize();
  return s;
}

RelStructure two_triangles() {
  RelStructure s = cycle(6);
  Relation e{2, {}};
  for (Elem base : {0U, 3U})
    for (Elem i = 0; i < 3; ++i)
      for (Elem j = 0; j < 3; ++j)
        if (i != j) e.tuples.push_back({base + i, base + j});
  s.relations["E"] = e;
  s.canonicalize();
  return s;
}

}  // namespace

TEST_CASE("isomorphic structures are never separated") {
  auto [a, b] = encode([] {
    XorFormula f(3);
    f.add_clause({0, 1}, 1);
    f.add_clause({1, 2}, 1);
    return f;
  }());
  CHECK_FALSE(solve_lk_game(a, b, 2).rounds.has_value());
  CHECK_FALSE(solve_lk_game(cycle(5), cycle(5), 3).rounds.has_value());
}

TEST_CASE("hexagon against two triangles") {
  // Both are 2-regular, so two pebbles see nothing. With three, Spoiler
  // pebbles a triangle and Duplicator cannot follow on the hexagon.
  CHECK_FALSE(solve_lk_game(cycle(6), two_triangles(), 2).rounds.has_value());
  auto r = solve_lk_game(cycle(6), two_triangles(), 3);
  REQUIRE(r.rounds.has_value());
  CHECK(*r.rounds == 3);
}

TEST_CASE("structure game matches the formula game on encodings") {
  Rng rng(31);
  int won = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = 1 + static_cast<std::uint32_t>(rng.below(4));
    auto f = normalize(oracle::random_formula(rng, n, 1 + static_cast<std::uint32_t>(rng.below(5)), 3));
    const auto k = 2 + static_cast<std::uint32_t>(rng.below(2));
    auto [a, b] = encode(f);
    auto lk = solve_lk_game(a, b, k);
    auto pv = oracle::pebble_value(f, k);
    CHECK(lk.rounds == pv);
    won += pv.has_value();
  }
  CHECK(won > 10);
}

TEST_CASE("guards") {
  RelStructure big;
  big.domain.resize(17);
  CHECK_THROWS_AS(solve_lk_game(big, big, 2), CapacityError);
  CHECK_THROWS_AS(solve_lk_game(cycle(4), cycle(4), 4), CapacityError);
  LkOptions tight;
  tight.max_positions = 3;
  CHECK_THROWS_AS(solve_lk_game(cycle(6), cycle(6), 3, tight), CapacityError);
}
