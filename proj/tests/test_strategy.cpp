#include "doctest.h"

#include <memory>

#include "oracles.hpp"
#include "xorwl/error.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/rng.hpp"
#include "xorwl/strategy.hpp"

using namespace xorwl;

namespace {

// Replays a fixed list of moves.
class ScriptP1 : public P1Strategy {
 public:
  explicit ScriptP1(std::vector<Move> moves) : moves_(std::move(moves)) {}
  Move next_move(const Assignment&) override { return moves_.at(i_++); }

 private:
  std::vector<Move> moves_;
  std::size_t i_ = 0;
};

class ScriptP2 : public P2Strategy {
 public:
  explicit ScriptP2(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  std::uint8_t answer(const Assignment&, Var) override { return bits_.at(i_++); }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t i_ = 0;
};

XorFormula two_var_contradiction() {
  XorFormula f(2);
  f.add_clause({0, 1}, 0);
  f.add_clause({0, 1}, 1);
  return f;
}

}  // namespace

TEST_CASE("optimal against optimal on P1_1 takes three rounds") {
  auto f = dag_to_xor(build_pyramid(1, 1));
  auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 3));
  auto s = extract_strategies(w);
  auto t = play(f, 3, *s.p1, *s.p2, 100);
  CHECK(t.p1_won);
  CHECK(t.length() == 3);
  CHECK(transcript_json(t) ==
        "[{\"round\":1,\"deleted\":[],\"query\":0,\"answer\":1},"
        "{\"round\":2,\"deleted\":[],\"query\":1,\"answer\":0},"
        "{\"round\":3,\"deleted\":[],\"query\":2,\"answer\":0}]\n");
}

TEST_CASE("optimal play realises the value on random formulas") {
  Rng rng(5);
  int won = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto f = oracle::random_formula(rng, 5, 6, 3);
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.below(2));
    auto w = std::make_shared<WinLevels>(solve_pebble_game(f, k));
    auto s = extract_strategies(w);
    if (auto v = w->value()) {
      ++won;
      auto t = play(f, k, *s.p1, *s.p2, 64);
      CHECK(t.p1_won);
      CHECK(t.length() == *v);
    } else {
      CHECK_THROWS_AS(play(f, k, *s.p1, *s.p2, 64), NoWinningMove);
    }
  }
  CHECK(won > 5);
}

TEST_CASE("optimal P1 beats any answers within its level") {
  Rng rng(9);
  auto f = dag_to_xor(build_pyramid(1, 2));
  auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 3));
  REQUIRE(w->value().has_value());
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> bits;
    for (int i = 0; i < 64; ++i) bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
    OptimalP1 p1(w);
    ScriptP2 p2(bits);
    auto t = play(f, 3, p1, p2, 64);
    CHECK(t.p1_won);
    CHECK(t.length() <= *w->value());
  }
}

TEST_CASE("a model-following Player 2 survives on satisfiable formulas") {
  XorFormula f(3);
  f.add_clause({0, 1}, 1);
  f.add_clause({1, 2}, 1);
  auto model = to_bits(*solve_gf2(f), 3);
  ScriptP1 p1({{{}, 0}, {{}, 1}, {{0}, 2}, {{1}, 0}, {{2}, 1}});
  ModelP2 p2(model);
  auto t = play(f, 2, p1, p2, 5);
  CHECK_FALSE(t.p1_won);
  CHECK(t.length() == 5);
  CHECK(t.high_water == 2);
}

TEST_CASE("answers may change on re-queries") {
  // x0 is answered 0, dropped, and then answered 1. Player 2 still loses
  // once both variables carry pebbles.
  auto f = two_var_contradiction();
  ScriptP1 p1({{{}, 0}, {{0}, 0}, {{}, 1}});
  ScriptP2 p2({0, 1, 1});
  auto t = play(f, 2, p1, p2, 10);
  REQUIRE(t.p1_won);
  CHECK(t.length() == 3);
  CHECK(t.rounds[0].answer == 0);
  CHECK(t.rounds[1].answer == 1);
}

TEST_CASE("protocol violations") {
  auto f = two_var_contradiction();
  ScriptP2 zeros({0, 0, 0, 0});
  {
    ScriptP1 p1({{{}, 5}});
    CHECK_THROWS_AS(play(f, 2, p1, zeros, 3), ProtocolError);
  }
  {
    ScriptP1 p1({{{}, 0}, {{}, 0}});
    ScriptP2 p2({0, 0});
    CHECK_THROWS_AS(play(f, 2, p1, p2, 3), ProtocolError);
  }
  {
    ScriptP1 p1({{{1}, 0}});
    ScriptP2 p2({0});
    CHECK_THROWS_AS(play(f, 2, p1, p2, 3), ProtocolError);
  }
  {
    XorFormula g(3);
    g.add_clause({0, 1, 2}, 0);
    ScriptP1 p1({{{}, 0}, {{}, 1}, {{}, 2}});
    ScriptP2 p2({0, 0, 0});
    CHECK_THROWS_AS(play(g, 2, p1, p2, 3), ProtocolError);
  }
  {
    ScriptP1 p1({{{}, 0}});
    ScriptP2 p2({2});
    CHECK_THROWS_AS(play(f, 2, p1, p2, 3), ProtocolError);
  }
  {
    ScriptP1 p1({{{}, 0}, {{0, 0}, 1}});
    ScriptP2 p2({0, 0});
    CHECK_THROWS_AS(play(f, 2, p1, p2, 3), ProtocolError);
  }
}

TEST_CASE("transcript length is at least the value against optimal Player 2") {
  Rng rng(13);
  auto f = dag_to_xor(build_pyramid(1, 2));
  auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 3));
  OptimalP2 p2(w);
  // Player 1 that plays a random legal move.
  class RandomP1 : public P1Strategy {
   public:
    RandomP1(Rng& rng, std::uint32_t n) : rng_(rng), n_(n) {}
    Move next_move(const Assignment& pos) override {
      Move m;
      Assignment rest = pos;
      if (rest.size() >= 3) {
        auto it = rest.begin();
        std::advance(it, rng_.below(rest.size()));
        m.deleted.push_back(it->first);
        rest.erase(it);
      }
      do {
        m.query = static_cast<Var>(rng_.below(n_));
      } while (rest.count(m.query));
      return m;
    }

   private:
    Rng& rng_;
    std::uint32_t n_;
  };
  for (int trial = 0; trial < 30; ++trial) {
    RandomP1 p1(rng, f.num_vars);
    auto t = play(f, 3, p1, p2, 200);
    if (t.p1_won) CHECK(t.length() >= *w->value());
  }
}
