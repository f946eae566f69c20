#include "xorwl/lk_game.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "xorwl/error.hpp"

namespace xorwl {

namespace {

constexpr std::uint16_t kInf = std::numeric_limits<std::uint16_t>::max();

// Packed position: up to three 16-bit slots, each holding pair code + 1,
// sorted ascending, unused slots zero.
using Key = std::uint64_t;

struct Pairs {
  std::uint32_t len = 0;
  std::uint32_t code[3] = {0, 0, 0};
};

Key pack(const Pairs& p) {
  Key k = 0;
  for (std::uint32_t i = 0; i < p.len; ++i) k |= static_cast<Key>(p.code[i] + 1) << (16 * i);
  return k;
}

Pairs unpack(Key k) {
  Pairs p;
  while (p.len < 3 && ((k >> (16 * p.len)) & 0xFFFF) != 0) {
    p.code[p.len] = static_cast<std::uint32_t>(((k >> (16 * p.len)) & 0xFFFF) - 1);
    ++p.len;
  }
  return p;
}

Pairs with(const Pairs& p, std::uint32_t code) {
  Pairs q = p;
  std::uint32_t i = q.len++;
  while (i > 0 && q.code[i - 1] > code) {
    q.code[i] = q.code[i - 1];
    --i;
  }
  q.code[i] = code;
  return q;
}

Pairs subset(const Pairs& p, std::uint32_t mask) {
  Pairs q;
  for (std::uint32_t i = 0; i < p.len; ++i)
    if (mask & (1U << i)) q.code[q.len++] = p.code[i];
  return q;
}

class Game {
 public:
  Game(const RelStructure& a, const RelStructure& b, std::uint32_t k)
      : a_(a), b_(b), k_(k), na_(a.size()), nb_(b.size()) {
    align_vocabulary(a_, b_);
    for (const auto* s : {&a_, &b_}) {
      std::vector<std::vector<std::uint8_t>> prof(s->size());
      for (const auto& [name, ext] : s->unary) {
        std::vector<std::uint8_t> in(s->size(), 0);
        for (Elem e : ext) in[e] = 1;
        for (Elem e = 0; e < s->size(); ++e) prof[e].push_back(in[e]);
      }
      profiles_.push_back(std::move(prof));
    }
  }

  std::uint32_t na() const { return na_; }
  std::uint32_t nb() const { return nb_; }
  Elem left(std::uint32_t code) const { return code / nb_; }
  Elem right(std::uint32_t code) const { return code % nb_; }

  // The pairs map A-elements to B-elements injectively and preserve unary
  // and relational atoms in both directions.
  bool partial_iso(const Pairs& p) const {
    for (std::uint32_t i = 0; i < p.len; ++i) {
      const Elem x = left(p.code[i]);
      const Elem y = right(p.code[i]);
      if (profiles_[0][x] != profiles_[1][y]) return false;
      for (std::uint32_t j = 0; j < i; ++j)
        if ((left(p.code[j]) == x) != (right(p.code[j]) == y)) return false;
    }
    for (const auto& [name, rel] : a_.relations) {
      const auto& other = b_.relations.at(name);
      if (!atoms_agree(p, rel, other.tuples, true) || !atoms_agree(p, other, rel.tuples, false))
        return false;
    }
    return true;
  }

 private:
  // Every tuple of `rel` built from pebbled elements on one side must map to
  // a tuple of `target` on the other side.
  bool atoms_agree(const Pairs& p, const Relation& rel, const std::vector<Tuple>& target,
                   bool from_a) const {
    if (rel.arity == 0 || p.len == 0) return true;
    std::vector<Elem> src(p.len);
    std::vector<Elem> dst(p.len);
    for (std::uint32_t i = 0; i < p.len; ++i) {
      src[i] = from_a ? left(p.code[i]) : right(p.code[i]);
      dst[i] = from_a ? right(p.code[i]) : left(p.code[i]);
    }
    // Enumerate all arity-length words over pebbled slots.
    std::vector<std::uint32_t> pick(rel.arity, 0);
    Tuple s(rel.arity);
    Tuple d(rel.arity);
    for (;;) {
      for (std::uint32_t j = 0; j < rel.arity; ++j) {
        s[j] = src[pick[j]];
        d[j] = dst[pick[j]];
      }
      const bool in_src = std::binary_search(rel.tuples.begin(), rel.tuples.end(), s);
      if (in_src && !std::binary_search(target.begin(), target.end(), d)) return false;
      std::uint32_t j = 0;
      while (j < rel.arity && ++pick[j] == p.len) pick[j++] = 0;
      if (j == rel.arity) break;
    }
    return true;
  }

  RelStructure a_;
  RelStructure b_;
  std::uint32_t k_;
  std::uint32_t na_;
  std::uint32_t nb_;
  std::vector<std::vector<std::vector<std::uint8_t>>> profiles_;
};

}  // namespace

LkResult solve_lk_game(const RelStructure& a, const RelStructure& b, std::uint32_t k,
                       LkOptions opts) {
  if (k > 3) throw CapacityError("the structure game solver supports at most 3 pebbles");
  if (a.size() > opts.max_domain || b.size() > opts.max_domain)
    throw CapacityError("structure game domain exceeds " + std::to_string(opts.max_domain));
  if (static_cast<std::uint64_t>(a.size()) * b.size() >= 0xFFFF)
    throw CapacityError("too many pebble pairs to pack");
  Game g(a, b, k);
  const std::uint32_t pairs = g.na() * g.nb();

  // Level-wise enumeration of partial isomorphisms, pairs kept sorted.
  std::vector<Key> keys{0};
  std::unordered_map<Key, std::uint32_t> id{{0, 0}};
  std::size_t frontier_begin = 0;
  for (std::uint32_t size = 1; size <= k; ++size) {
    const std::size_t frontier_end = keys.size();
    for (std::size_t t = frontier_begin; t < frontier_end; ++t) {
      const Pairs p = unpack(keys[t]);
      const std::uint32_t start = p.len == 0 ? 0 : p.code[p.len - 1] + 1;
      for (std::uint32_t c = start; c < pairs; ++c) {
        Pairs q = with(p, c);
        if (!g.partial_iso(q)) continue;
        const Key key = pack(q);
        id.emplace(key, static_cast<std::uint32_t>(keys.size()));
        keys.push_back(key);
        if (keys.size() > opts.max_positions)
          throw CapacityError("structure game exceeds " + std::to_string(opts.max_positions) + " positions");
      }
    }
    frontier_begin = frontier_end;
  }
  if (!g.partial_iso(Pairs{})) return {0, keys.size()};

  std::vector<std::uint16_t> level(keys.size(), kInf);
  auto level_of = [&](const Pairs& p) -> std::uint16_t {
    auto it = id.find(pack(p));
    return it == id.end() ? 0 : level[it->second];
  };

  std::vector<std::uint8_t> good(keys.size(), 0);
  for (std::uint32_t r = 0;; ++r) {
    // good: Spoiler can place a fresh pebble so every reply is at level <= r.
    for (std::size_t t = 0; t < keys.size(); ++t) {
      const Pairs p = unpack(keys[t]);
      good[t] = 0;
      if (p.len >= k) continue;
      std::vector<std::uint8_t> used_a(g.na(), 0);
      std::vector<std::uint8_t> used_b(g.nb(), 0);
      for (std::uint32_t i = 0; i < p.len; ++i) {
        used_a[g.left(p.code[i])] = 1;
        used_b[g.right(p.code[i])] = 1;
      }
      auto spoiler_wins_with = [&](bool side_a, Elem e) {
        const std::uint32_t other = side_a ? g.nb() : g.na();
        for (Elem f = 0; f < other; ++f) {
          // Answering with an already pebbled element breaks injectivity.
          if (side_a ? used_b[f] : used_a[f]) continue;
          const std::uint32_t code = side_a ? e * g.nb() + f : f * g.nb() + e;
          if (level_of(with(p, code)) > r) return false;
        }
        return true;
      };
      for (Elem e = 0; e < g.na() && !good[t]; ++e)
        if (!used_a[e] && spoiler_wins_with(true, e)) good[t] = 1;
      for (Elem e = 0; e < g.nb() && !good[t]; ++e)
        if (!used_b[e] && spoiler_wins_with(false, e)) good[t] = 1;
    }
    bool changed = false;
    std::vector<std::uint16_t> next = level;
    for (std::size_t t = 0; t < keys.size(); ++t) {
      if (level[t] != kInf) continue;
      const Pairs p = unpack(keys[t]);
      const std::uint32_t all = (1U << p.len) - 1;
      for (std::uint32_t mask = 0; mask <= all; ++mask) {
        if (p.len == k && mask == all) continue;
        auto it = id.find(pack(subset(p, mask)));
        if (it != id.end() && good[it->second]) {
          next[t] = static_cast<std::uint16_t>(r + 1);
          changed = true;
          break;
        }
      }
    }
    level.swap(next);
    if (!changed) break;
  }
  LkResult res;
  res.positions = keys.size();
  if (level[0] != kInf) res.rounds = level[0];
  return res;
}

}  // namespace xorwl
