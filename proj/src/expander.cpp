#include "xorwl/expander.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "xorwl/error.hpp"
#include "xorwl/parallel.hpp"
#include "xorwl/rng.hpp"

namespace xorwl {

namespace {

std::uint64_t binom_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

std::string set_text(const std::vector<std::uint32_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

RightSet merge(const RightSet& a, const RightSet& b) {
  RightSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

BipartiteGraph BipartiteGraph::from_lists(std::uint32_t right, std::vector<std::vector<RightVertex>> raw) {
  BipartiteGraph g;
  g.left = static_cast<std::uint32_t>(raw.size());
  g.right = right;
  g.raw = std::move(raw);
  for (const auto& r : g.raw) {
    g.delta = std::max<std::uint32_t>(g.delta, static_cast<std::uint32_t>(r.size()));
    RightSet n = r;
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    g.nbr.push_back(std::move(n));
  }
  g.validate();
  return g;
}

void BipartiteGraph::validate() const {
  if (raw.size() != left || nbr.size() != left) throw StructuralError("graph tables have the wrong size");
  for (LeftVertex u = 0; u < left; ++u) {
    if (raw[u].size() > delta) throw StructuralError("left vertex exceeds the degree bound");
    for (RightVertex v : raw[u])
      if (v >= right) throw StructuralError("right vertex out of range");
  }
}

BipartiteGraph sample_graph(std::uint32_t left, std::uint32_t right, std::uint32_t delta,
                            std::uint64_t seed) {
  if (left == 0 || right == 0 || delta == 0) throw StructuralError("graph sizes must be positive");
  Rng rng(seed);
  std::vector<std::vector<RightVertex>> raw(left);
  for (LeftVertex u = 0; u < left; ++u)
    for (std::uint32_t j = 0; j < delta; ++j) raw[u].push_back(static_cast<RightVertex>(rng.below(right)));
  BipartiteGraph g = BipartiteGraph::from_lists(right, std::move(raw));
  g.delta = delta;
  return g;
}

BipartiteGraph matching_graph(std::uint32_t n) {
  std::vector<std::vector<RightVertex>> raw(n);
  for (std::uint32_t i = 0; i < n; ++i) raw[i] = {i};
  return BipartiteGraph::from_lists(n, std::move(raw));
}

RightSet neighbourhood(const BipartiteGraph& g, const LeftSet& u) {
  RightSet out;
  for (LeftVertex x : u) out.insert(out.end(), g.nbr.at(x).begin(), g.nbr.at(x).end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RightSet boundary(const BipartiteGraph& g, const LeftSet& u) {
  std::vector<RightVertex> all;
  for (LeftVertex x : u) all.insert(all.end(), g.nbr.at(x).begin(), g.nbr.at(x).end());
  std::sort(all.begin(), all.end());
  RightSet out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    if (j - i == 1) out.push_back(all[i]);
    i = j;
  }
  return out;
}

ExpansionReport check_expansion_on(const BipartiteGraph& g, const LeftSet& live,
                                   const RightSet& removed, std::uint32_t s, double c,
                                   ExpansionOptions opts) {
  ExpansionReport rep;
  rep.s = s;
  rep.c = c;
  const std::uint32_t n = static_cast<std::uint32_t>(live.size());
  const std::uint32_t top = std::min(s, n);
  std::vector<std::uint64_t> class_size(top + 1, 0);
  std::uint64_t total = 0;
  for (std::uint32_t t = 1; t <= top; ++t) {
    class_size[t] = binom_capped(n, t, opts.max_subsets);
    total += class_size[t];
    if (total > opts.max_subsets)
      throw CapacityError("expansion check exceeds " + std::to_string(opts.max_subsets) + " subsets");
  }
  std::vector<std::uint8_t> gone(g.right, 0);
  for (RightVertex v : removed) gone.at(v) = 1;

  // Per size class: index of the first violator in lexicographic order.
  std::vector<std::int64_t> first(top + 1, -1);
  std::vector<LeftSet> witness(top + 1);
  parallel_for(top, opts.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> count(g.right, 0);
    for (std::size_t ci = begin; ci < end; ++ci) {
      const std::uint32_t t = static_cast<std::uint32_t>(ci + 1);
      std::vector<std::uint32_t> idx(t);
      for (std::uint32_t j = 0; j < t; ++j) idx[j] = j;
      for (std::int64_t pos = 0;; ++pos) {
        for (std::uint32_t j : idx)
          for (RightVertex v : g.nbr[live[j]]) ++count[v];
        std::uint32_t bd = 0;
        for (std::uint32_t j : idx)
          for (RightVertex v : g.nbr[live[j]]) {
            if (count[v] == 1 && !gone[v]) ++bd;
          }
        for (std::uint32_t j : idx)
          for (RightVertex v : g.nbr[live[j]]) count[v] = 0;
        if (static_cast<double>(bd) < c * t) {
          first[t] = pos;
          for (std::uint32_t j : idx) witness[t].push_back(live[j]);
          break;
        }
        // Lexicographic successor of the index combination.
        std::int64_t j = static_cast<std::int64_t>(t) - 1;
        while (j >= 0 && idx[j] == n - t + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (std::uint32_t q = static_cast<std::uint32_t>(j) + 1; q < t; ++q) idx[q] = idx[q - 1] + 1;
      }
    }
  });
  for (std::uint32_t t = 1; t <= top; ++t) {
    if (first[t] >= 0) {
      rep.pass = false;
      rep.witness = witness[t];
      rep.subsets_scanned += static_cast<std::uint64_t>(first[t]) + 1;
      return rep;
    }
    rep.subsets_scanned += class_size[t];
  }
  return rep;
}

ExpansionReport check_expansion(const BipartiteGraph& g, std::uint32_t s, double c,
                                ExpansionOptions opts) {
  LeftSet all(g.left);
  for (LeftVertex u = 0; u < g.left; ++u) all[u] = u;
  return check_expansion_on(g, all, {}, s, c, opts);
}

std::string expansion_report_json(const ExpansionReport& r) {
  nlohmann::ordered_json j;
  j["s"] = r.s;
  j["c"] = r.c;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (r.witness) j["witness"] = *r.witness;
  else j["witness"] = nullptr;
  j["subsets_scanned"] = r.subsets_scanned;
  return j.dump() + "\n";
}

LeftSet kernel(const BipartiteGraph& g, const RightSet& v) {
  LeftSet out;
  for (LeftVertex u = 0; u < g.left; ++u)
    if (std::includes(v.begin(), v.end(), g.nbr[u].begin(), g.nbr[u].end())) out.push_back(u);
  return out;
}

std::vector<std::pair<LeftVertex, RightVertex>> peel_order(const BipartiteGraph& g, const LeftSet& u) {
  LeftSet rest = u;
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
  std::vector<std::pair<LeftVertex, RightVertex>> order(rest.size());
  for (std::size_t slot = rest.size(); slot-- > 0;) {
    const RightSet bd = boundary(g, rest);
    if (bd.empty()) throw NotExpandingError("peeling stuck on " + set_text(rest), rest);
    const RightVertex v = bd.front();
    auto owner = std::find_if(rest.begin(), rest.end(), [&](LeftVertex x) {
      return std::binary_search(g.nbr[x].begin(), g.nbr[x].end(), v);
    });
    order[slot] = {*owner, v};
    rest.erase(owner);
  }
  return order;
}

ClosureResult closure(const BipartiteGraph& g, const RightSet& v0, std::uint32_t s,
                      ExpansionOptions opts, bool verify_expander) {
  RightSet start = v0;
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  if (start.size() > s / 2) throw PreconditionError("closure needs |V'| <= s/2");
  if (verify_expander) {
    auto rep = check_expansion(g, s, 2, opts);
    if (!rep.pass)
      throw PreconditionError("closure needs an (" + std::to_string(s) + ",2)-boundary expander; " +
                              set_text(*rep.witness) + " violates it");
  }
  ClosureResult res;
  RightSet cur = start;
  std::ostringstream trace;
  for (;;) {
    const LeftSet ker = kernel(g, cur);
    LeftSet all(g.left);
    for (LeftVertex u = 0; u < g.left; ++u) all[u] = u;
    LeftSet live;
    std::set_difference(all.begin(), all.end(), ker.begin(), ker.end(), std::back_inserter(live));
    auto rep = check_expansion_on(g, live, cur, s / 2, 1, opts);
    if (rep.pass) break;
    cur = merge(cur, neighbourhood(g, *rep.witness));
    res.trace.push_back(ClosureStep{*rep.witness, cur});
    trace << " U=" << set_text(*rep.witness) << " V=" << set_text(cur);
  }
  res.gamma = cur;
  res.kernel = kernel(g, cur);
  if (!std::includes(res.gamma.begin(), res.gamma.end(), start.begin(), start.end()))
    throw PreconditionError("closure lost part of V';" + trace.str());
  if (res.kernel.size() > start.size())
    throw PreconditionError("closure kernel has " + std::to_string(res.kernel.size()) +
                            " vertices, more than |V'|;" + trace.str());
  return res;
}

std::string write_graph(const BipartiteGraph& g) {
  std::ostringstream out;
  out << "bip " << g.left << ' ' << g.right << ' ' << g.delta << '\n';
  for (const auto& r : g.raw) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << r[j];
    out << '\n';
  }
  return out.str();
}

BipartiteGraph read_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string tag;
  std::uint64_t l = 0, m = 0, d = 0;
  bool header = false;
  std::vector<std::vector<RightVertex>> raw;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!header) {
      if (!(ls >> tag >> l >> m >> d) || tag != "bip") throw FormatError("expected 'bip <l> <m> <delta>'");
      header = true;
      continue;
    }
    std::vector<RightVertex> row;
    std::int64_t x;
    while (ls >> x) {
      if (x < 0 || static_cast<std::uint64_t>(x) >= m) throw FormatError("right vertex out of range");
      row.push_back(static_cast<RightVertex>(x));
    }
    if (!ls.eof()) throw FormatError("bad token in graph line");
    if (row.size() > d) throw FormatError("row exceeds the degree bound");
    raw.push_back(std::move(row));
  }
  if (!header) throw FormatError("missing graph header");
  if (raw.size() != l) throw FormatError("graph has " + std::to_string(raw.size()) + " rows, expected " + std::to_string(l));
  BipartiteGraph g = BipartiteGraph::from_lists(static_cast<std::uint32_t>(m), std::move(raw));
  g.delta = static_cast<std::uint32_t>(d);
  return g;
}

}  // namespace xorwl
