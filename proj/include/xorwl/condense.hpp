#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xorwl/expander.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/strategy.hpp"
#include "xorwl/structure.hpp"
#include "xorwl/xor.hpp"

namespace xorwl {

/// XOR substitution with recycling: every occurrence of u becomes the
/// variables of N(u), concatenated. Raw lists keep the repetitions; the
/// support is the reduced clause.
XorFormula xorify(const XorFormula& f, const BipartiteGraph& g);

/// Parity of beta over N(u) for every left vertex u.
std::vector<std::uint8_t> induced_assignment(const BipartiteGraph& g, const std::vector<std::uint8_t>& beta);

/// Is there an extension of beta to N(dom alpha) with alpha(u) equal to the
/// parity over N(u) for every assigned u?
bool consistency_check(const Assignment& alpha, const Assignment& beta, const BipartiteGraph& g);

/// Runs a Player 1 strategy for F on F[G]: each query of u turns into
/// queries of the unassigned members of N(u) in increasing order, and the
/// parity of N(u) is reported back to the inner strategy.
class LiftedP1 : public P1Strategy {
 public:
  LiftedP1(std::shared_ptr<P1Strategy> inner, XorFormula base, BipartiteGraph g, std::uint32_t inner_k)
      : inner_(std::move(inner)), base_(std::move(base)), g_(std::move(g)), inner_k_(inner_k) {}

  void begin(const XorFormula& f, std::uint32_t k) override;
  Move next_move(const Assignment& position) override;
  void observe(const Move& move, std::uint8_t answer) override;
  std::size_t high_water() const override { return high_water_; }

 private:
  void settle(const Assignment& position);

  std::shared_ptr<P1Strategy> inner_;
  XorFormula base_;
  BipartiteGraph g_;
  std::uint32_t inner_k_;
  std::uint32_t budget_ = 0;
  Assignment alpha_;  // simulated position on the base formula
  Assignment board_;  // our view of the position on the substituted formula
  bool pending_ = false;
  Move inner_move_;
  std::vector<Var> queue_;
  std::size_t high_water_ = 0;
};

struct CondensationReport {
  std::uint32_t k = 0;
  bool skipped = false;
  std::string reason;
  std::optional<std::uint32_t> r_base;
  std::optional<std::uint32_t> r_substituted;
  std::uint32_t bound = 0;  // ceil(r_base / 2k)
  bool holds = true;
};

/// Compares the k-pebble values of F and F[G]. Skips when G is not a
/// (2k,2)-boundary expander. The ratio check is skipped when F is never won.
CondensationReport verify_condensation(const XorFormula& f, const BipartiteGraph& g, std::uint32_t k,
                                       PebbleOptions popts = {}, ExpansionOptions eopts = {});

std::string condensation_report_json(const CondensationReport& r);

struct PipelineParams {
  std::uint32_t d = 1;
  std::uint32_t h = 1;
  std::uint32_t degree = 3;
  std::uint32_t k_target = 2;    // expansion is certified for s = 2 * k_target
  std::uint32_t right_size = 0;  // 0: ceil(left^(3/degree))
  std::uint64_t seed = 0;
  std::uint32_t max_tries = 50;
};

struct PipelineJob {
  PipelineParams params;
  XorFormula base;
  BipartiteGraph graph;
  std::uint64_t graph_seed = 0;
  std::vector<std::uint64_t> seeds_tried;
  XorFormula product;
  RelStructure a;
  RelStructure b;
};

/// Pyramid formula, then the first sampled graph (seeds seed, seed+1, ...)
/// that passes the expansion check, then substitution and encoding.
PipelineJob build_pipeline(const PipelineParams& p, ExpansionOptions eopts = {});
/// Same, but with a caller-supplied graph.
PipelineJob build_pipeline(const PipelineParams& p, const BipartiteGraph& g);

std::uint32_t default_right_size(std::uint32_t left, std::uint32_t degree);

/// JSON manifest with parameters, seeds and FNV-1a hashes of every artefact.
std::string pipeline_manifest(const PipelineJob& job);

/// Sizes implied by the asymptotic parameter schedule for given n and
/// k_min <= k_max. Nothing here is enforced.
struct ScheduleReport {
  double n = 0;
  std::uint32_t k_min = 0;
  std::uint32_t k_max = 0;
  std::uint32_t l_min = 3;
  std::uint32_t l_max = 0;
  std::uint32_t p = 3;
  std::uint32_t delta = 0;
  std::uint32_t s = 0;
  double log2_m = 0;          // m = n^floor(k_min/9)
  double r = 0;               // m^(1/(1+ceil log l_max)) / ceil log l_max - 2
  double log2_h_vars = 0;     // ceil(m^(3/delta)) in log2
  std::uint32_t pyramid_d = 0;
  double pyramid_h = 0;
  bool k_range_ok = false;     // k_min <= k_max <= n^(1/6) / k_min
  bool delta_positive = false;
  bool delta_ratio_ok = false; // delta <= l_max / l_min
  bool size_ok = false;        // (2 l_max delta)^(2 delta) <= m
};

ScheduleReport schedule_parameters(double n, std::uint32_t k_min, std::uint32_t k_max);
std::string schedule_report_json(const ScheduleReport& r);

}  // namespace xorwl
