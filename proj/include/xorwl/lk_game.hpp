#pragma once

#include <cstdint>
#include <optional>

#include "xorwl/structure.hpp"

namespace xorwl {

struct LkOptions {
  std::uint32_t max_domain = 16;
  std::uint64_t max_positions = 5'000'000;
};

struct LkResult {
  std::optional<std::uint32_t> rounds;  // nullopt: Duplicator survives forever
  std::uint64_t positions = 0;          // partial isomorphisms enumerated
};

/// Existential-free k-pebble game on two structures. A position is a set of
/// at most k pebble pairs (a, b); Spoiler wins as soon as the pairs stop
/// forming a partial isomorphism. Each round Spoiler lifts pebbles (at
/// least one when all k are down) and places a new pebble on either side;
/// Duplicator answers on the other side. Returns the least number of
/// rounds Spoiler needs.
LkResult solve_lk_game(const RelStructure& a, const RelStructure& b, std::uint32_t k,
                       LkOptions opts = {});

}  // namespace xorwl
