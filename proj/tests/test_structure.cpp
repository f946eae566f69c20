#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "xorwl/error.hpp"
#include "xorwl/structure.hpp"

using namespace xorwl;

namespace {

XorFormula single(std::vector<Var> vars, std::uint8_t parity, std::uint32_t n) {
  XorFormula f(n);
  f.add_clause(std::move(vars), parity);
  return f;
}

}  // namespace

TEST_CASE("encoding of one 2-clause") {
  auto [a, b] = encode(single({0, 1}, 1, 2));
  CHECK(a.size() == 4);
  CHECK(a.domain[0] == "x0^0");
  CHECK(a.domain[3] == "x1^1");
  CHECK(a.unary.at("X0") == std::vector<Elem>{0, 1});
  CHECK(a.unary.at("X1") == std::vector<Elem>{2, 3});
  // Even-sum tuples in A, odd-sum tuples in B.
  CHECK(a.relations.at("R2").tuples == std::vector<Tuple>{{0, 2}, {1, 3}});
  CHECK(b.relations.at("R2").tuples == std::vector<Tuple>{{0, 3}, {1, 2}});
}

TEST_CASE("encode preconditions") {
  XorFormula rep(2);
  rep.add_clause({0, 0, 1}, 0);
  CHECK_THROWS_AS(encode(rep), PreconditionError);
  XorFormula zero(1);
  zero.add_clause({0, 0}, 0);
  CHECK_THROWS_AS(encode(normalize(zero)), StructuralError);
}

TEST_CASE("bijection round trip") {
  Assignment a{{0, 1}, {1, 0}, {2, 1}};
  auto beta = assignment_to_bijection(a, 3);
  CHECK(beta == StructBijection{1, 0, 2, 3, 5, 4});
  CHECK(bijection_to_assignment(beta, 3) == a);
  CHECK_THROWS_AS(bijection_to_assignment({2, 3, 0, 1}, 2), PreconditionError);
}

TEST_CASE("models become isomorphisms") {
  auto f = single({0, 1}, 1, 2);
  auto [a, b] = encode(f);
  CHECK(is_isomorphism(a, b, assignment_to_bijection({{0, 1}, {1, 0}}, 2)));
  CHECK_FALSE(is_isomorphism(a, b, assignment_to_bijection({{0, 1}, {1, 1}}, 2)));
  auto iso = find_isomorphism(a, b);
  REQUIRE(iso.has_value());
  // Least in lexicographic order: x0 unflipped, x1 flipped.
  CHECK(*iso == StructBijection{0, 1, 3, 2});
}

TEST_CASE("unsatisfiable formulas have no isomorphism") {
  XorFormula f(1);
  f.add_clause({0}, 0);
  f.add_clause({0}, 1);
  auto [a, b] = encode(f);
  CHECK_FALSE(find_isomorphism(a, b).has_value());
}

TEST_CASE("sat iff iso on random formulas") {
  Rng rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    const auto n = 1 + static_cast<std::uint32_t>(rng.below(6));
    auto f = oracle::random_formula(rng, n, 1 + static_cast<std::uint32_t>(rng.below(6)), 3);
    auto [a, b] = encode(normalize(f));
    auto iso = find_isomorphism(a, b);
    CHECK(iso.has_value() == oracle::brute_sat(f));
    if (iso) {
      CHECK(satisfies(f, to_bits(bijection_to_assignment(*iso, n), n)));
    }
  }
}

TEST_CASE("general isomorphism search on a path") {
  RelStructure p;
  p.domain = {"a", "b", "c"};
  p.relations["E"] = {2, {{0, 1}, {1, 2}}};
  auto q = relabel(p, {2, 0, 1});
  auto iso = find_isomorphism(p, q);
  REQUIRE(iso.has_value());
  CHECK(is_isomorphism(p, q, *iso));
  RelStructure big;
  big.domain.resize(9);
  CHECK_THROWS_AS(find_isomorphism(big, big), CapacityError);
}

TEST_CASE("disjoint union shifts the second operand") {
  RelStructure a;
  a.domain = {"u"};
  a.unary["P"] = {0};
  RelStructure b;
  b.domain = {"v", "w"};
  b.relations["E"] = {2, {{0, 1}}};
  auto u = disjoint_union(a, b);
  CHECK(u.size() == 3);
  CHECK(u.unary.at("P") == std::vector<Elem>{0});
  CHECK(u.relations.at("E").tuples == std::vector<Tuple>{{1, 2}});
}

TEST_CASE("structure json round trip") {
  auto [a, b] = encode(single({0, 1, 2}, 0, 3));
  auto text = write_structure_json(a);
  CHECK(read_structure_json(text) == a);
  CHECK_THROWS_AS(read_structure_json("{\"domain\": 3}"), FormatError);
}

TEST_CASE("relabelling is invertible") {
  auto [a, b] = encode(single({0, 1}, 0, 3));
  std::vector<Elem> pi(a.size());
  std::iota(pi.begin(), pi.end(), 0);
  std::reverse(pi.begin(), pi.end());
  std::vector<Elem> inv(pi.size());
  for (Elem e = 0; e < pi.size(); ++e) inv[pi[e]] = e;
  CHECK(relabel(relabel(a, pi), inv) == a);
}
