#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xorwl/position.hpp"
#include "xorwl/xor.hpp"

namespace xorwl {

inline constexpr std::uint16_t kNoWinLevel = std::numeric_limits<std::uint16_t>::max();

struct PebbleOptions {
  std::uint64_t max_positions = 10'000'000;
  std::size_t workers = 1;
};

/// Least fixpoint of the k-pebble game: level[p] is the fewest rounds in
/// which Player 1 forces a falsified clause from position p, or kNoWinLevel.
struct WinLevels {
  XorFormula formula;
  std::uint32_t k = 0;
  PositionSpace space;
  std::vector<std::uint16_t> level;
  std::uint32_t iterations = 0;  // fixpoint sweeps, including the final idle one

  std::uint16_t level_of(const Position& p) const { return level[space.index(p)]; }
  std::uint16_t level_of(const Assignment& a) const;
  /// Rounds needed from the empty position; nullopt when Player 2 survives forever.
  std::optional<std::uint32_t> value() const;
};

WinLevels solve_pebble_game(const XorFormula& f, std::uint32_t k, PebbleOptions opts = {});

std::optional<std::uint32_t> pebble_value(const XorFormula& f, std::uint32_t k,
                                          PebbleOptions opts = {});

/// {"value":"rounds"|"nowin","r":..,"positions_explored":..,"wallclock_ms":..}
std::string solver_result_json(std::optional<std::uint32_t> value, std::uint64_t positions,
                               double wallclock_ms);

}  // namespace xorwl
