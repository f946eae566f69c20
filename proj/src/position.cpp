#include "xorwl/position.hpp"

#include <algorithm>

#include "xorwl/error.hpp"

namespace xorwl {

Assignment Position::to_assignment() const {
  Assignment a;
  for (std::size_t j = 0; j < vars.size(); ++j) a[vars[j]] = value(j);
  return a;
}

Position Position::from_assignment(const Assignment& a) {
  Position p;
  std::uint32_t j = 0;
  for (const auto& [v, b] : a) {
    p.vars.push_back(v);
    if (b & 1U) p.bits |= 1U << j;
    ++j;
  }
  return p;
}

std::uint64_t PositionSpace::count(std::uint32_t n, std::uint32_t k, std::uint64_t limit) {
  unsigned __int128 total = 0;
  unsigned __int128 c = 1;  // C(n, i); stays below 2^64 until we bail out
  for (std::uint32_t i = 0; i <= k && i <= n; ++i) {
    if (i > 0) c = c * (n - i + 1) / i;
    if (i >= 64 || c > limit) return limit + 1;
    total += c << i;
    if (total > limit) return limit + 1;
  }
  return static_cast<std::uint64_t>(total);
}

PositionSpace::PositionSpace(std::uint32_t n, std::uint32_t k, std::uint64_t capacity)
    : n_(n), k_(std::min(k, n)) {
  if (k_ > 30) throw CapacityError("too many pebbles for the position index");
  const std::uint64_t total = count(n_, k_, capacity);
  if (total > capacity)
    throw CapacityError("position space exceeds " + std::to_string(capacity) + " positions");
  total_ = static_cast<std::size_t>(total);

  binom_.assign(static_cast<std::size_t>(n_ + 1) * (k_ + 1), 0);
  for (std::uint32_t a = 0; a <= n_; ++a) {
    binom_[a * (k_ + 1)] = 1;
    for (std::uint32_t b = 1; b <= k_ && b <= a; ++b)
      binom_[a * (k_ + 1) + b] = binom(a - 1, b - 1) + binom(a - 1, b);
  }

  offset_.assign(k_ + 2, 0);
  combos_.resize(k_ + 1);
  for (std::uint32_t i = 0; i <= k_; ++i) {
    const std::uint64_t c = binom(n_, i);
    offset_[i + 1] = offset_[i] + static_cast<std::size_t>(c << i);
    auto& flat = combos_[i];
    flat.reserve(static_cast<std::size_t>(c) * i);
    if (i == 0) continue;
    std::vector<Var> cur(i);
    for (std::uint32_t j = 0; j < i; ++j) cur[j] = j;
    for (std::uint64_t r = 0; r < c; ++r) {
      flat.insert(flat.end(), cur.begin(), cur.end());
      // Colex successor: bump the lowest entry that has room, reset below it.
      std::uint32_t j = 0;
      while (j < i && cur[j] + 1 == (j + 1 < i ? cur[j + 1] : n_)) ++j;
      if (j == i) break;
      ++cur[j];
      for (std::uint32_t t = 0; t < j; ++t) cur[t] = t;
    }
  }
}

std::size_t PositionSpace::index(const Var* vars, std::uint32_t len, std::uint32_t bits) const {
  std::uint64_t rank = 0;
  for (std::uint32_t j = 0; j < len; ++j) rank += binom(vars[j], j + 1);
  return offset_[len] + static_cast<std::size_t>(rank << len) + bits;
}

std::uint32_t PositionSpace::size_of(std::size_t idx) const {
  auto it = std::upper_bound(offset_.begin(), offset_.end(), idx);
  return static_cast<std::uint32_t>(it - offset_.begin() - 1);
}

const Var* PositionSpace::vars_of(std::size_t idx) const {
  const std::uint32_t i = size_of(idx);
  const std::size_t rank = (idx - offset_[i]) >> i;
  return combos_[i].data() + rank * i;
}

std::uint32_t PositionSpace::bits_of(std::size_t idx) const {
  const std::uint32_t i = size_of(idx);
  return static_cast<std::uint32_t>((idx - offset_[i]) & ((std::size_t{1} << i) - 1));
}

Position PositionSpace::decode(std::size_t idx) const {
  const std::uint32_t i = size_of(idx);
  const Var* v = vars_of(idx);
  return Position{std::vector<Var>(v, v + i), bits_of(idx)};
}

}  // namespace xorwl
