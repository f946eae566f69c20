#include "xorwl/wl.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "xorwl/error.hpp"
#include "xorwl/parallel.hpp"

namespace xorwl {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

// Sorts fixed-length keys and returns their dense ranks.
std::vector<std::uint32_t> rank_keys(const std::vector<std::uint32_t>& flat, std::size_t len,
                                     std::size_t count, std::uint32_t* distinct) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0U);
  auto less = [&](std::uint32_t x, std::uint32_t y) {
    const auto* px = flat.data() + static_cast<std::size_t>(x) * len;
    const auto* py = flat.data() + static_cast<std::size_t>(y) * len;
    return std::lexicographical_compare(px, px + len, py, py + len);
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<std::uint32_t> rank(count);
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0 && less(order[i - 1], order[i])) ++id;
    rank[order[i]] = id;
  }
  *distinct = count == 0 ? 0 : id + 1;
  return rank;
}

std::vector<std::uint32_t> rank_vectors(const std::vector<std::vector<std::uint32_t>>& keys,
                                        std::uint32_t* distinct) {
  std::vector<std::uint32_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return keys[x] < keys[y]; });
  std::vector<std::uint32_t> rank(keys.size());
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && keys[order[i - 1]] != keys[order[i]]) ++id;
    rank[order[i]] = id;
  }
  *distinct = keys.empty() ? 0 : id + 1;
  return rank;
}

}  // namespace

Tuple Colouring::tuple(std::size_t index) const {
  Tuple t(k);
  for (std::uint32_t j = k; j-- > 0;) {
    t[j] = static_cast<Elem>(index % n);
    index /= n;
  }
  return t;
}

std::size_t Colouring::index(const Tuple& t) const {
  std::size_t idx = 0;
  for (Elem e : t) idx = idx * n + e;
  return idx;
}

WlContext::WlContext(const RelStructure& s, std::uint32_t k, WlOptions opts)
    : s_(s), k_(k), n_(s.size()), opts_(opts) {
  if (k_ < 1) throw PreconditionError("WL dimension must be at least 1");
  s_.validate();
  const std::uint64_t ext = checked_pow(n_, k_ + 1, opts_.max_tuples);
  if (ext > opts_.max_tuples)
    throw CapacityError("WL needs n^(k+1) = more than " + std::to_string(opts_.max_tuples) + " tuples");

  std::vector<std::vector<std::uint32_t>> profiles(n_);
  for (const auto& [name, ext_list] : s_.unary) {
    std::vector<std::uint8_t> in(n_, 0);
    for (Elem e : ext_list) in[e] = 1;
    for (Elem e = 0; e < n_; ++e) profiles[e].push_back(in[e]);
  }
  std::uint32_t distinct = 0;
  profile_ = rank_vectors(profiles, &distinct);

  std::uint32_t rel_index = 0;
  for (const auto& [name, rel] : s_.relations) {
    rel_names_.push_back(name);
    for (const auto& t : rel.tuples) {
      std::vector<Elem> key = t;
      std::sort(key.begin(), key.end());
      key.erase(std::unique(key.begin(), key.end()), key.end());
      by_support_[key].emplace_back(rel_index, t);
    }
    ++rel_index;
  }

  const std::size_t count = static_cast<std::size_t>(ext);
  std::vector<std::vector<std::uint32_t>> sigs(count);
  parallel_for(count, opts_.workers, [&](std::size_t begin, std::size_t end) {
    Tuple t(k_ + 1);
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t x = i;
      for (std::uint32_t j = k_ + 1; j-- > 0;) {
        t[j] = static_cast<Elem>(x % n_);
        x /= n_;
      }
      sigs[i] = atomic_signature(t);
    }
  });
  ext_type_ = rank_vectors(sigs, &distinct);
}

std::vector<std::uint32_t> WlContext::atomic_signature(const Tuple& t) const {
  const std::size_t m = t.size();
  std::vector<std::uint32_t> sig;
  sig.reserve(3 * m + 8);
  sig.push_back(static_cast<std::uint32_t>(m));
  for (std::size_t j = 0; j < m; ++j) {
    std::uint32_t first = static_cast<std::uint32_t>(j);
    for (std::size_t i = 0; i < j; ++i)
      if (t[i] == t[j]) {
        first = static_cast<std::uint32_t>(i);
        break;
      }
    sig.push_back(first);
  }
  for (Elem e : t) sig.push_back(profile_.at(e));

  std::vector<Elem> distinct = t;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::vector<std::uint32_t>> records;
  const std::uint32_t d = static_cast<std::uint32_t>(distinct.size());
  std::vector<Elem> subset;
  for (std::uint32_t mask = 1; mask < (1U << d); ++mask) {
    subset.clear();
    for (std::uint32_t i = 0; i < d; ++i)
      if (mask & (1U << i)) subset.push_back(distinct[i]);
    auto it = by_support_.find(subset);
    if (it == by_support_.end()) continue;
    for (const auto& [rel, tuple] : it->second) {
      std::vector<std::uint32_t> rec{rel, static_cast<std::uint32_t>(tuple.size())};
      for (Elem e : tuple)
        rec.push_back(static_cast<std::uint32_t>(std::find(t.begin(), t.end(), e) - t.begin()));
      records.push_back(std::move(rec));
    }
  }
  std::sort(records.begin(), records.end());
  sig.push_back(static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) sig.insert(sig.end(), r.begin(), r.end());
  return sig;
}

Colouring WlContext::initial() const {
  Colouring c;
  c.k = k_;
  c.n = n_;
  const std::size_t count = static_cast<std::size_t>(checked_pow(n_, k_, ~std::uint64_t{0}));
  std::vector<std::vector<std::uint32_t>> sigs(count);
  parallel_for(count, opts_.workers, [&](std::size_t begin, std::size_t end) {
    Colouring shape = c;
    for (std::size_t i = begin; i < end; ++i) sigs[i] = atomic_signature(shape.tuple(i));
  });
  c.colours = rank_vectors(sigs, &c.num_colours);
  return c;
}

Colouring WlContext::refine(const Colouring& c) const {
  if (c.k != k_ || c.n != n_) throw PreconditionError("colouring does not match the structure");
  const std::size_t count = c.colours.size();
  const std::size_t type_len = k_ + 1;
  const std::size_t len = 1 + n_ * type_len;
  std::vector<std::size_t> pow(k_);
  for (std::uint32_t j = 0; j < k_; ++j) pow[j] = static_cast<std::size_t>(checked_pow(n_, k_ - 1 - j, ~std::uint64_t{0}));

  std::vector<std::uint32_t> flat(count * len);
  parallel_for(count, opts_.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> types(n_ * type_len);
    std::vector<std::uint32_t> order(n_);
    Tuple t(k_);
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t x = i;
      for (std::uint32_t j = k_; j-- > 0;) {
        t[j] = static_cast<Elem>(x % n_);
        x /= n_;
      }
      for (Elem v = 0; v < n_; ++v) {
        std::uint32_t* ty = &types[v * type_len];
        ty[0] = ext_type_[i * n_ + v];
        for (std::uint32_t j = 0; j < k_; ++j)
          ty[1 + j] = c.colours[i - t[j] * pow[j] + v * pow[j]];
      }
      std::iota(order.begin(), order.end(), 0U);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(&types[a * type_len], &types[(a + 1) * type_len],
                                            &types[b * type_len], &types[(b + 1) * type_len]);
      });
      std::uint32_t* key = &flat[i * len];
      key[0] = c.colours[i];
      for (Elem v = 0; v < n_; ++v)
        std::copy_n(&types[order[v] * type_len], type_len, key + 1 + v * type_len);
    }
  });
  Colouring out;
  out.k = k_;
  out.n = n_;
  out.iteration = c.iteration + 1;
  out.colours = rank_keys(flat, len, count, &out.num_colours);
  return out;
}

Colouring initial_colouring(const RelStructure& s, std::uint32_t k, WlOptions opts) {
  return WlContext(s, k, opts).initial();
}

Colouring refine_step(const RelStructure& s, const Colouring& c, WlOptions opts) {
  return WlContext(s, c.k, opts).refine(c);
}

StableResult stable_colouring(const RelStructure& s, std::uint32_t k, WlOptions opts,
                              bool keep_history) {
  WlContext ctx(s, k, opts);
  StableResult res;
  Colouring c = ctx.initial();
  if (keep_history) res.history.push_back(c);
  for (;;) {
    Colouring next = ctx.refine(c);
    if (next.num_colours == c.num_colours) break;
    c = std::move(next);
    ++res.steps;
    if (keep_history) res.history.push_back(c);
  }
  res.colouring = std::move(c);
  return res;
}

namespace {

// Histograms of colours over tuples lying entirely in one side of the union.
bool histograms_differ(const Colouring& c, Elem split) {
  std::vector<std::int64_t> balance(c.num_colours, 0);
  Tuple t;
  for (std::size_t i = 0; i < c.colours.size(); ++i) {
    t = c.tuple(i);
    bool all_a = true;
    bool all_b = true;
    for (Elem e : t) {
      if (e < split) all_b = false;
      else all_a = false;
    }
    if (all_a) ++balance[c.colours[i]];
    else if (all_b) --balance[c.colours[i]];
  }
  return std::any_of(balance.begin(), balance.end(), [](std::int64_t x) { return x != 0; });
}

}  // namespace

std::optional<std::uint32_t> wl_distinguish(const RelStructure& a, const RelStructure& b,
                                            std::uint32_t k, WlOptions opts) {
  if (a.size() != b.size()) return 0;
  WlContext ctx(disjoint_union(a, b), k, opts);
  Colouring c = ctx.initial();
  for (std::uint32_t step = 0;; ++step) {
    if (histograms_differ(c, a.size())) return step;
    Colouring next = ctx.refine(c);
    if (next.num_colours == c.num_colours) return std::nullopt;
    c = std::move(next);
  }
}

bool refines(const Colouring& finer, const Colouring& coarser) {
  if (finer.colours.size() != coarser.colours.size()) return false;
  std::vector<std::int64_t> owner(finer.num_colours, -1);
  for (std::size_t i = 0; i < finer.colours.size(); ++i) {
    auto& o = owner[finer.colours[i]];
    if (o < 0) o = coarser.colours[i];
    else if (o != coarser.colours[i]) return false;
  }
  return true;
}

bool same_partition(const Colouring& x, const Colouring& y) {
  return x.num_colours == y.num_colours && refines(x, y) && refines(y, x);
}

std::string colouring_csv(const Colouring& c) {
  std::ostringstream out;
  out << "tuple_ids,colour_id,iteration\n";
  for (std::size_t i = 0; i < c.colours.size(); ++i) {
    auto t = c.tuple(i);
    for (std::size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << t[j];
    out << ',' << c.colours[i] << ',' << c.iteration << '\n';
  }
  return out.str();
}

}  // namespace xorwl
