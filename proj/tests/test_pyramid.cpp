#include "doctest.h"

#include <memory>

#include "oracles.hpp"
#include "xorwl/error.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/strategy.hpp"

using namespace xorwl;

namespace {

std::uint32_t layer_size(const LayeredDag& g, std::uint32_t l) {
  std::uint32_t c = 0;
  for (auto x : g.layer) c += x == l;
  return c;
}

// Cycles through the sources, lifting the oldest pebble when the board is full.
class SourceP1 : public P1Strategy {
 public:
  explicit SourceP1(std::vector<Vertex> sources) : sources_(std::move(sources)) {}
  void begin(const XorFormula&, std::uint32_t k) override { k_ = k; }
  Move next_move(const Assignment& position) override {
    Move m;
    if (position.size() == k_) m.deleted.push_back(order_[order_.size() - k_]);
    m.query = sources_[next_++ % sources_.size()];
    order_.push_back(m.query);
    return m;
  }

 private:
  std::vector<Vertex> sources_;
  std::uint32_t k_ = 0;
  std::size_t next_ = 0;
  std::vector<Var> order_;
};

}  // namespace

TEST_CASE("P1_1 is the three-vertex pyramid") {
  auto g = build_pyramid(1, 1);
  CHECK(g.size() == 3);
  CHECK(g.names == std::vector<std::string>{"p(0;0)", "p(0;1)", "p(1;1)"});
  CHECK(g.in[0] == std::vector<Vertex>{1, 2});
  CHECK(g.sources() == std::vector<Vertex>{1, 2});
  CHECK(g.sinks() == std::vector<Vertex>{0});
  CHECK(write_xorf(dag_to_xor(g)) ==
        "xorf 3 4\n# name 0 p(0;0)\n# name 1 p(0;1)\n# name 2 p(1;1)\n1 | 0\n2 | 0\n0 1 2 | 0\n0 | 1\n");
}

TEST_CASE("layer sizes") {
  // d = 1: layer l is a path of l+1 points.
  auto g1 = build_pyramid(1, 4);
  for (std::uint32_t l = 0; l <= 4; ++l) CHECK(layer_size(g1, l) == l + 1);
  // d = 2: one coordinate grows per layer, alternating.
  auto g2 = build_pyramid(2, 4);
  const std::uint32_t expect[] = {1, 2, 4, 6, 9};
  for (std::uint32_t l = 0; l <= 4; ++l) CHECK(layer_size(g2, l) == expect[l]);
  CHECK(g2.max_in_degree() == 2);
  CHECK(g2.sinks().size() == 1);
}

TEST_CASE("pyramid vertex lookup and names") {
  auto g = build_pyramid(2, 3);
  auto v = pyramid_vertex(g, {1, 1}, 2);
  CHECK(g.names[v] == "p(1,1;2)");
  CHECK(g.layer[v] == 2);
  CHECK_THROWS_AS(pyramid_vertex(g, {2, 0}, 1), StructuralError);
  CHECK_THROWS_AS(build_pyramid(0, 1), StructuralError);
  CHECK_THROWS_AS(build_pyramid(1, 0), StructuralError);
  CHECK_THROWS_AS(build_pyramid(8, 40, 1000), CapacityError);
}

TEST_CASE("pyramid formulas are unsatisfiable") {
  for (std::uint32_t d = 1; d <= 2; ++d)
    for (std::uint32_t h = 1; h <= 3; ++h) CHECK_FALSE(solve_gf2(dag_to_xor(build_pyramid(d, h))).has_value());
}

TEST_CASE("dump lists every edge") {
  CHECK(pyramid_dump(build_pyramid(1, 1)) == "p(0;0) <- p(0;1)\np(0;0) <- p(1;1)\n");
}

TEST_CASE("labelling extension agrees with brute force") {
  auto g = build_pyramid(2, 2);
  auto all = oracle::consistent_labellings(g);
  REQUIRE_FALSE(all.empty());
  // top = 0, S ranges over subsets of the deepest layer (>= top + d = 2).
  std::vector<Vertex> deep;
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.layer[v] == 2) deep.push_back(v);
  for (std::uint32_t mask = 0; mask < (1U << deep.size()); ++mask) {
    std::vector<Vertex> s;
    for (std::uint32_t i = 0; i < deep.size(); ++i)
      if (mask & (1U << i)) s.push_back(deep[i]);
    bool exists = false;
    for (const auto& lab : all) {
      bool ok = true;
      for (auto v : s) ok = ok && lab[v] == 0;
      exists = exists || ok;
    }
    Labelling m{{g.sinks().front(), 1}};
    if (exists) {
      auto full = extend_labelling(g, m, 0, s);
      CHECK(consistent(g, [&] {
        Labelling l;
        for (Vertex v = 0; v < g.size(); ++v) l[v] = full[v];
        return l;
      }()));
      for (auto v : s) CHECK(full[v] == 0);
      CHECK(full[g.sinks().front()] == 1);
    } else {
      CHECK_THROWS_AS(extend_labelling(g, m, 0, s), InfeasibleError);
    }
  }
}

TEST_CASE("labelling extension preconditions") {
  auto g = build_pyramid(2, 3);
  const Vertex z = g.sinks().front();
  CHECK_THROWS_AS(extend_labelling(g, {}, 0, {}), PreconditionError);
  CHECK_THROWS_AS(extend_labelling(g, {{z, 0}}, 0, {}), PreconditionError);
  // Vertex on layer 1 < top + d.
  CHECK_THROWS_AS(extend_labelling(g, {{z, 1}}, 0, {pyramid_vertex(g, {0, 0}, 1)}), PreconditionError);
}

TEST_CASE("DAG strategy wins P1_1 in three rounds") {
  auto g = build_pyramid(1, 1);
  auto f = dag_to_xor(g);
  auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 3));
  DagP1 p1(g);
  OptimalP2 p2(w);
  auto t = play(f, 3, p1, p2, 20);
  CHECK(t.p1_won);
  CHECK(t.length() == 3);
}

TEST_CASE("DAG strategy wins P2_3 with three pebbles") {
  auto g = build_pyramid(2, 3);
  auto f = dag_to_xor(g);
  auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 3));
  DagP1 p1(g);
  OptimalP2 p2(w);
  auto t = play(f, 3, p1, p2, 200);
  CHECK(t.p1_won);
  CHECK(t.high_water <= 3);
  // One query per layer plus the sink and the final source.
  CHECK(t.length() <= 2 * (g.height + 1));
}

TEST_CASE("DAG strategy rejects foreign formulas and small budgets") {
  auto g = build_pyramid(1, 1);
  XorFormula other(3);
  other.add_clause({0, 1}, 1);
  DagP1 p1(g);
  ModelP2 p2({0, 1, 0});
  CHECK_THROWS_AS(play(other, 3, p1, p2, 5), PreconditionError);
  CHECK_THROWS_AS(play(dag_to_xor(g), 2, p1, p2, 5), PreconditionError);
}

TEST_CASE("layer-skipping Player 2 outlasts the optimal Player 1") {
  for (std::uint32_t h = 2; h <= 4; ++h) {
    auto g = build_pyramid(2, h);
    auto f = dag_to_xor(g);
    auto w = std::make_shared<WinLevels>(solve_pebble_game(f, 4));
    if (!w->value()) continue;
    OptimalP1 p1(w);
    PyramidP2 p2(g);
    auto t = play(f, 4, p1, p2, 500);
    CHECK(t.length() + 1 >= h);
    CHECK(t.notes.empty());
  }
}

TEST_CASE("layer-skipping Player 2 outlasts a sources-only Player 1") {
  auto g = build_pyramid(2, 4);
  auto f = dag_to_xor(g);
  SourceP1 p1(g.sources());
  PyramidP2 p2(g);
  // 2^d - 1 = 3 queries are the floor; this Player 1 never forces a loss.
  auto t = play(f, 4, p1, p2, 40);
  CHECK_FALSE(t.p1_won);
  CHECK(t.length() == 40);
  for (const auto& r : t.rounds) CHECK(r.answer == 0);
}

TEST_CASE("layer-skipping Player 2 flags an oversized budget") {
  auto g = build_pyramid(2, 2);
  auto f = dag_to_xor(g);
  DagP1 p1(g);
  PyramidP2 p2(g);
  auto t = play(f, 5, p1, p2, 50);
  REQUIRE_FALSE(t.notes.empty());
  CHECK(t.notes.front().find("guarantee void") != std::string::npos);
  CHECK_THROWS_AS(PyramidP2(build_pyramid(1, 2)), PreconditionError);
}
