#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xorwl/structure.hpp"

namespace xorwl {

/// Colours of all k-tuples over a domain of size n. Tuple (e_0,...,e_{k-1})
/// has index sum e_j * n^(k-1-j), so index order is lexicographic.
struct Colouring {
  std::uint32_t k = 0;
  std::uint32_t n = 0;
  std::uint32_t iteration = 0;
  std::uint32_t num_colours = 0;
  std::vector<std::uint32_t> colours;

  std::size_t num_tuples() const { return colours.size(); }
  Tuple tuple(std::size_t index) const;
  std::size_t index(const Tuple& t) const;
  std::uint32_t colour(const Tuple& t) const { return colours[index(t)]; }
};

struct WlOptions {
  std::uint64_t max_tuples = 20'000'000;  // guard on n^(k+1)
  std::size_t workers = 1;
};

/// Precomputed atomic types of (k+1)-tuples, shared by every refinement step.
/// Building it is the expensive part, so callers that refine repeatedly
/// should construct one WlContext and reuse it.
class WlContext {
 public:
  WlContext(const RelStructure& s, std::uint32_t k, WlOptions opts = {});

  const RelStructure& structure() const { return s_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t n() const { return n_; }
  const WlOptions& options() const { return opts_; }

  /// Canonical id of the isomorphism type of an arbitrary tuple.
  std::vector<std::uint32_t> atomic_signature(const Tuple& t) const;

  Colouring initial() const;
  Colouring refine(const Colouring& c) const;

 private:
  RelStructure s_;
  std::uint32_t k_;
  std::uint32_t n_;
  WlOptions opts_;
  std::vector<std::uint32_t> profile_;  // canonical unary profile per element
  std::vector<std::string> rel_names_;
  // Relation tuples grouped by their sorted set of distinct elements.
  std::map<std::vector<Elem>, std::vector<std::pair<std::uint32_t, Tuple>>> by_support_;
  std::vector<std::uint32_t> ext_type_;  // canonical atomic id of every (k+1)-tuple
};

Colouring initial_colouring(const RelStructure& s, std::uint32_t k, WlOptions opts = {});
Colouring refine_step(const RelStructure& s, const Colouring& c, WlOptions opts = {});

struct StableResult {
  Colouring colouring;
  std::uint32_t steps = 0;
  std::vector<Colouring> history;  // history[i] is the colouring after i steps
};

/// Refines until the partition stops changing. steps counts only the
/// iterations that split some class; the final confirming pass is not
/// counted.
StableResult stable_colouring(const RelStructure& s, std::uint32_t k, WlOptions opts = {},
                              bool keep_history = false);

/// Joint refinement of the disjoint union. Returns the least iteration at
/// which the colour histograms of A-tuples and B-tuples differ.
std::optional<std::uint32_t> wl_distinguish(const RelStructure& a, const RelStructure& b,
                                            std::uint32_t k, WlOptions opts = {});

/// True when every class of `finer` lies inside a class of `coarser`.
bool refines(const Colouring& finer, const Colouring& coarser);
/// Same partition, ignoring colour names.
bool same_partition(const Colouring& x, const Colouring& y);

/// CSV `tuple_ids,colour_id,iteration`; tuple ids are space separated.
std::string colouring_csv(const Colouring& c);

}  // namespace xorwl
