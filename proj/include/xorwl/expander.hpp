#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace xorwl {

using LeftVertex = std::uint32_t;
using RightVertex = std::uint32_t;
using LeftSet = std::vector<LeftVertex>;    // sorted
using RightSet = std::vector<RightVertex>;  // sorted

/// Bipartite graph with left-degree bound delta. raw[u] keeps the sampled
/// neighbour list with repetitions, nbr[u] its sorted deduplicated set.
struct BipartiteGraph {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t delta = 0;
  std::vector<std::vector<RightVertex>> raw;
  std::vector<RightSet> nbr;

  static BipartiteGraph from_lists(std::uint32_t right, std::vector<std::vector<RightVertex>> raw);
  void validate() const;
  bool operator==(const BipartiteGraph&) const = default;
};

/// delta independent uniform draws from the right side for every left vertex.
BipartiteGraph sample_graph(std::uint32_t left, std::uint32_t right, std::uint32_t delta,
                            std::uint64_t seed);

/// Left vertex i matched to right vertex i.
BipartiteGraph matching_graph(std::uint32_t n);

/// Right vertices with exactly one neighbour in u.
RightSet boundary(const BipartiteGraph& g, const LeftSet& u);
RightSet neighbourhood(const BipartiteGraph& g, const LeftSet& u);

struct ExpansionOptions {
  std::uint64_t max_subsets = 2'000'000;
  std::size_t workers = 1;
};

struct ExpansionReport {
  std::uint32_t s = 0;
  double c = 0;
  bool pass = true;
  std::optional<LeftSet> witness;
  std::uint64_t subsets_scanned = 0;
};

/// Every left set of size 1..s must have boundary >= c * size. Sets are
/// scanned by size, then lexicographically, so the witness is the first
/// violator in that order. subsets_scanned counts up to the witness.
ExpansionReport check_expansion(const BipartiteGraph& g, std::uint32_t s, double c,
                                ExpansionOptions opts = {});

/// Same scan restricted to the left vertices `live`, counting only boundary
/// vertices outside `removed` (the right side with `removed` deleted).
ExpansionReport check_expansion_on(const BipartiteGraph& g, const LeftSet& live,
                                   const RightSet& removed, std::uint32_t s, double c,
                                   ExpansionOptions opts = {});

std::string expansion_report_json(const ExpansionReport& r);

/// Left vertices whose whole neighbourhood lies in v.
LeftSet kernel(const BipartiteGraph& g, const RightSet& v);

/// Pairs (u_i, v_i) with v_i in N(u_i) but outside N(u_1..u_{i-1}).
/// Throws NotExpandingError with the stuck set if some subset has an empty
/// boundary.
std::vector<std::pair<LeftVertex, RightVertex>> peel_order(const BipartiteGraph& g, const LeftSet& u);

struct ClosureStep {
  LeftSet violator;
  RightSet grown;  // V_{i+1}
};

struct ClosureResult {
  RightSet gamma;
  LeftSet kernel;
  std::vector<ClosureStep> trace;
};

/// Grows v by neighbourhoods of violating left sets until the graph with
/// gamma deleted (and its kernel removed) is an (s/2, 1)-boundary expander.
/// Throws PreconditionError, carrying the trace in its message, if a
/// postcondition fails.
/// With verify_expander set, first certifies that g is an (s,2)-expander.
ClosureResult closure(const BipartiteGraph& g, const RightSet& v, std::uint32_t s,
                      ExpansionOptions opts = {}, bool verify_expander = true);

/// `bip <l> <m> <delta>` then one line of raw neighbours per left vertex.
std::string write_graph(const BipartiteGraph& g);
BipartiteGraph read_graph(const std::string& text);

}  // namespace xorwl
