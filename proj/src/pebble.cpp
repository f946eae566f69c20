#include "xorwl/pebble.hpp"

#include <algorithm>

#include "json.hpp"
#include "xorwl/error.hpp"
#include "xorwl/parallel.hpp"

namespace xorwl {

namespace {

bool falsified_at(const XorFormula& f, const Var* vars, std::uint32_t len, std::uint32_t bits,
                  std::vector<std::int8_t>& slot) {
  for (std::uint32_t j = 0; j < len; ++j) slot[vars[j]] = static_cast<std::int8_t>(j);
  bool hit = false;
  for (const auto& c : f.clauses) {
    if (c.width() > len) continue;
    std::uint8_t sum = 0;
    bool covered = true;
    for (Var v : c.support) {
      if (slot[v] < 0) {
        covered = false;
        break;
      }
      sum ^= (bits >> slot[v]) & 1U;
    }
    if (covered && sum != c.parity) {
      hit = true;
      break;
    }
  }
  for (std::uint32_t j = 0; j < len; ++j) slot[vars[j]] = -1;
  return hit;
}

// Inserts x (absent from vars) with value b, keeping the order.
std::uint32_t insert_var(const Var* vars, std::uint32_t len, std::uint32_t bits, Var x,
                         std::uint8_t b, Var* out) {
  std::uint32_t pos = 0;
  while (pos < len && vars[pos] < x) ++pos;
  for (std::uint32_t j = 0; j < pos; ++j) out[j] = vars[j];
  out[pos] = x;
  for (std::uint32_t j = pos; j < len; ++j) out[j + 1] = vars[j];
  const std::uint32_t low = bits & ((1U << pos) - 1);
  const std::uint32_t high = bits >> pos;
  return low | (static_cast<std::uint32_t>(b) << pos) | (high << (pos + 1));
}

}  // namespace

std::uint16_t WinLevels::level_of(const Assignment& a) const {
  if (a.size() > space.k()) throw PreconditionError("position larger than the pebble budget");
  for (const auto& [v, b] : a) {
    (void)b;
    if (v >= formula.num_vars) throw StructuralError("position variable out of range");
  }
  return level_of(Position::from_assignment(a));
}

std::optional<std::uint32_t> WinLevels::value() const {
  const std::uint16_t l = level[0];
  if (l == kNoWinLevel) return std::nullopt;
  return l;
}

WinLevels solve_pebble_game(const XorFormula& f, std::uint32_t k, PebbleOptions opts) {
  f.validate();
  WinLevels w{f, k, PositionSpace(f.num_vars, k, opts.max_positions), {}, 0};
  const PositionSpace& sp = w.space;
  const std::size_t total = sp.size();
  const std::uint32_t n = f.num_vars;
  // The deletion rule only bites when every one of the k pebbles is down.
  const std::uint32_t full = k;
  w.level.assign(total, kNoWinLevel);

  parallel_for(total, opts.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int8_t> slot(n, -1);
    for (std::size_t i = begin; i < end; ++i)
      if (falsified_at(f, sp.vars_of(i), sp.size_of(i), sp.bits_of(i), slot)) w.level[i] = 0;
  });

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < total; ++i)
    if (w.level[i] == kNoWinLevel) open.push_back(i);

  std::vector<std::uint8_t> good(total, 0);
  std::vector<std::uint8_t> promote;
  for (std::uint32_t r = 0;; ++r) {
    ++w.iterations;
    if (r + 1 >= kNoWinLevel) throw CapacityError("round count exceeds level range");
    // good[p]: from p (fewer than k pebbles) some query has both answers at level <= r.
    parallel_for(total, opts.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<Var> child(sp.k() + 1);
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint32_t len = sp.size_of(i);
        good[i] = 0;
        if (len >= k || len >= sp.k()) continue;
        const Var* vars = sp.vars_of(i);
        const std::uint32_t bits = sp.bits_of(i);
        std::uint32_t j = 0;
        for (Var x = 0; x < n; ++x) {
          if (j < len && vars[j] == x) {
            ++j;
            continue;
          }
          const std::uint32_t b0 = insert_var(vars, len, bits, x, 0, child.data());
          if (w.level[sp.index(child.data(), len + 1, b0)] > r) continue;
          const std::uint32_t b1 = insert_var(vars, len, bits, x, 1, child.data());
          if (w.level[sp.index(child.data(), len + 1, b1)] > r) continue;
          good[i] = 1;
          break;
        }
      }
    });
    promote.assign(open.size(), 0);
    parallel_for(open.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<Var> sub(sp.k() + 1);
      for (std::size_t t = begin; t < end; ++t) {
        const std::size_t i = open[t];
        const std::uint32_t len = sp.size_of(i);
        const Var* vars = sp.vars_of(i);
        const std::uint32_t bits = sp.bits_of(i);
        const std::uint32_t all = (1U << len) - 1;
        for (std::uint32_t mask = 0; mask <= all; ++mask) {
          if (len == full && mask == all) continue;  // must delete something
          std::uint32_t sl = 0;
          std::uint32_t sb = 0;
          for (std::uint32_t j = 0; j < len; ++j)
            if (mask & (1U << j)) {
              sb |= ((bits >> j) & 1U) << sl;
              sub[sl++] = vars[j];
            }
          if (good[sp.index(sub.data(), sl, sb)]) {
            promote[t] = 1;
            break;
          }
        }
      }
    });
    std::vector<std::size_t> still;
    bool changed = false;
    for (std::size_t t = 0; t < open.size(); ++t) {
      if (promote[t]) {
        w.level[open[t]] = static_cast<std::uint16_t>(r + 1);
        changed = true;
      } else {
        still.push_back(open[t]);
      }
    }
    open.swap(still);
    if (!changed) break;
  }
  return w;
}

std::optional<std::uint32_t> pebble_value(const XorFormula& f, std::uint32_t k, PebbleOptions opts) {
  return solve_pebble_game(f, k, opts).value();
}

std::string solver_result_json(std::optional<std::uint32_t> value, std::uint64_t positions,
                               double wallclock_ms) {
  nlohmann::ordered_json j;
  j["value"] = value ? "rounds" : "nowin";
  if (value) j["r"] = *value;
  else j["r"] = nullptr;
  j["positions_explored"] = positions;
  j["wallclock_ms"] = wallclock_ms;
  return j.dump() + "\n";
}

}  // namespace xorwl
