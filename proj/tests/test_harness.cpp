#include "doctest.h"

#include <filesystem>
#include <set>

#include "json.hpp"
#include "oracles.hpp"
#include "xorwl/harness.hpp"

using namespace xorwl;
namespace fs = std::filesystem;

TEST_CASE("corpus shapes") {
  auto eq = equivalence_corpus();
  CHECK(eq.size() >= 20);
  std::set<std::string> ids;
  for (const auto& inst : eq) {
    CHECK(inst.formula.num_vars <= 8);
    CHECK(inst.k == 2);
    CHECK_FALSE(oracle::brute_sat(inst.formula));
    ids.insert(inst.id);
  }
  CHECK(ids.size() == eq.size());

  for (const auto& inst : three_pebble_corpus()) {
    CHECK(inst.k == 3);
    CHECK_FALSE(oracle::brute_sat(inst.formula));
  }

  auto mixed = mixed_corpus(1);
  std::size_t sat = 0;
  for (const auto& inst : mixed) {
    CHECK(inst.formula.num_vars <= 8);
    sat += oracle::brute_sat(inst.formula);
  }
  CHECK(sat > 0);
  CHECK(sat < mixed.size());
}

TEST_CASE("rows agree with independent oracles") {
  EvalOptions o;
  o.wl = false;
  for (const auto& inst : mixed_corpus(2)) {
    if (inst.formula.num_vars > 6) continue;
    auto row = evaluate_instance(inst, o);
    const bool sat = oracle::brute_sat(inst.formula);
    CHECK(row.sat == (sat ? "true" : "false"));
    CHECK(row.iso == row.sat);
    auto pv = oracle::pebble_value(inst.formula, inst.k);
    CHECK(row.pebble_rounds == (pv ? std::to_string(*pv) : "nowin"));
  }
}

TEST_CASE("equivalence summary on the built-in corpus") {
  auto corpus = equivalence_corpus();
  auto rows = evaluate_corpus(corpus, {}, 2);
  auto sum = check_equivalence(corpus, rows);
  CHECK(sum.ok());
  REQUIRE(sum.offset.has_value());
  CHECK(*sum.offset == 1);
  for (const auto& r : rows) CHECK(r.lk_rounds == (r.pebble_rounds == "nowin" ? "none" : r.pebble_rounds));
}

TEST_CASE("reports are independent of the worker count") {
  auto corpus = equivalence_corpus();
  auto one = report_csv(evaluate_corpus(corpus, {}, 1));
  auto four = report_csv(evaluate_corpus(corpus, {}, 4));
  CHECK(one == four);
  CHECK(one.rfind(report_header() + "\n", 0) == 0);
  CHECK(report_header() == "id,family,n,d,h,k,pebble_rounds,wl_steps,lk_rounds,sat,iso,wallclock_ms");
}

TEST_CASE("goldens survive a round trip and catch drift") {
  auto corpus = equivalence_corpus();
  corpus.resize(5);
  auto rows = evaluate_corpus(corpus, {});
  record_goldens(corpus, rows);
  const fs::path dir = fs::temp_directory_path() / "xorwl_corpus_roundtrip";
  fs::remove_all(dir);
  write_corpus(dir.string(), corpus);
  auto back = load_corpus(dir.string());
  REQUIRE(back.size() == corpus.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == corpus[i].id);
    CHECK(back[i].formula == corpus[i].formula);
    CHECK(back[i].golden.pebble_rounds == corpus[i].golden.pebble_rounds);
  }
  CHECK(check_equivalence(back, rows).ok());
  back[0].golden.pebble_rounds = "99";
  auto sum = check_equivalence(back, rows);
  CHECK_FALSE(sum.goldens_match);
  CHECK_FALSE(sum.problems.empty());
  fs::remove_all(dir);
}

TEST_CASE("json report") {
  auto corpus = equivalence_corpus();
  corpus.resize(1);
  auto j = nlohmann::json::parse(report_json(evaluate_corpus(corpus, {})));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["id"] == corpus[0].id);
  CHECK(j[0]["k"] == 2);
}
