#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xorwl/xor.hpp"

namespace xorwl {

struct Golden {
  std::optional<std::string> pebble_rounds;  // number or "nowin"
  std::optional<std::string> wl_steps;       // number or "none"
  std::optional<std::string> lk_rounds;      // number or "none"
  std::optional<bool> sat;
  std::optional<bool> iso;
};

struct CorpusInstance {
  std::string id;
  std::string family;
  XorFormula formula;
  std::uint32_t k = 2;
  std::uint32_t d = 0;
  std::uint32_t h = 0;
  std::uint64_t seed = 0;
  Golden golden;
};

/// Unsatisfiable formulas with at most 8 variables, all played with k = 2
/// so that the partner WL dimension is 1.
std::vector<CorpusInstance> equivalence_corpus();

/// Unsatisfiable formulas played with k = 3; used only to compare the two
/// game solvers.
std::vector<CorpusInstance> three_pebble_corpus();

/// Satisfiable and unsatisfiable formulas with at most 8 variables.
std::vector<CorpusInstance> mixed_corpus(std::uint64_t seed = 1);

struct ReportRow {
  std::string id;
  std::string family;
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint32_t h = 0;
  std::uint32_t k = 0;
  std::string pebble_rounds;  // number, "nowin", or empty if not computed
  std::string wl_steps;       // number, "none", or empty
  std::string lk_rounds;      // number, "none", or empty
  std::string sat;            // "true" / "false"
  std::string iso;            // "true" / "false" / empty
  double wallclock_ms = 0;
};

struct EvalOptions {
  bool pebble = true;
  bool wl = true;
  bool lk = true;
  bool iso = true;
  bool timing = false;  // wallclock_ms stays 0 unless set, keeping reports byte-stable
  std::uint64_t max_positions = 10'000'000;
  std::size_t workers = 1;  // inside one instance
};

ReportRow evaluate_instance(const CorpusInstance& inst, const EvalOptions& opts = {});

/// Rows in corpus order; instances are spread over `workers` threads.
std::vector<ReportRow> evaluate_corpus(const std::vector<CorpusInstance>& corpus, const EvalOptions& opts,
                                       std::size_t workers = 1);

std::string report_header();
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows);

struct EquivalenceSummary {
  bool lk_matches = true;
  bool offset_constant = true;
  std::optional<int> offset;  // pebble_rounds - wl_steps
  bool offset_in_range = true;
  bool nowin_agrees = true;
  bool invariants_hold = true;  // sat implies nowin and iso
  bool goldens_match = true;
  std::vector<std::string> problems;

  bool ok() const {
    return lk_matches && offset_constant && offset_in_range && nowin_agrees && invariants_hold && goldens_match;
  }
};

EquivalenceSummary check_equivalence(const std::vector<CorpusInstance>& corpus,
                                     const std::vector<ReportRow>& rows);

/// Fills each instance's golden values from a freshly computed row.
void record_goldens(std::vector<CorpusInstance>& corpus, const std::vector<ReportRow>& rows);

/// One directory per instance with formula.xorf and manifest.json.
void write_corpus(const std::string& dir, const std::vector<CorpusInstance>& corpus);
std::vector<CorpusInstance> load_corpus(const std::string& dir);

}  // namespace xorwl
