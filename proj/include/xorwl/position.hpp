#pragma once

#include <cstdint>
#include <vector>

#include "xorwl/xor.hpp"

namespace xorwl {

/// Partial assignment of at most k variables. vars is sorted ascending and
/// bit j of `bits` is the value of vars[j].
struct Position {
  std::vector<Var> vars;
  std::uint32_t bits = 0;

  std::size_t size() const { return vars.size(); }
  std::uint8_t value(std::size_t j) const { return (bits >> j) & 1U; }
  Assignment to_assignment() const;
  static Position from_assignment(const Assignment& a);
  bool operator==(const Position&) const = default;
};

/// Dense numbering of all positions with at most k of n variables.
///
/// Positions of size i occupy one contiguous block; inside it the variable
/// set is ranked in colex order (rank = sum_j C(vars[j], j+1)) and the low i
/// bits carry the values. Lookups are arithmetic, so the solver keeps plain
/// arrays instead of hash sets.
class PositionSpace {
 public:
  PositionSpace(std::uint32_t n, std::uint32_t k, std::uint64_t capacity);

  /// sum_{i<=k} 2^i C(n,i), saturating at limit+1.
  static std::uint64_t count(std::uint32_t n, std::uint32_t k, std::uint64_t limit);

  std::uint32_t n() const { return n_; }
  std::uint32_t k() const { return k_; }
  std::size_t size() const { return total_; }

  std::size_t index(const Var* vars, std::uint32_t len, std::uint32_t bits) const;
  std::size_t index(const Position& p) const {
    return index(p.vars.data(), static_cast<std::uint32_t>(p.vars.size()), p.bits);
  }
  std::uint32_t size_of(std::size_t idx) const;
  Position decode(std::size_t idx) const;
  /// Pointer to the sorted variable set of a decoded index (size_of(idx) entries).
  const Var* vars_of(std::size_t idx) const;
  std::uint32_t bits_of(std::size_t idx) const;

 private:
  std::uint64_t binom(std::uint32_t a, std::uint32_t b) const {
    return b > a ? 0 : binom_[a * (k_ + 1) + b];
  }

  std::uint32_t n_;
  std::uint32_t k_;
  std::size_t total_ = 0;
  std::vector<std::uint64_t> binom_;
  std::vector<std::size_t> offset_;           // offset_[i] = first index of size i
  std::vector<std::vector<Var>> combos_;      // combos_[i] = colex-ordered i-subsets, flattened
};

}  // namespace xorwl
