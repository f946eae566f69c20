#include "xorwl/pyramid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "xorwl/error.hpp"

namespace xorwl {

namespace {

std::vector<std::uint32_t> layer_bounds(std::uint32_t d, std::uint32_t l) {
  const std::uint32_t q = l / d;
  const std::uint32_t r = l % d;
  std::vector<std::uint32_t> b(d);
  for (std::uint32_t i = 0; i < d; ++i) b[i] = i < r ? q + 1 : q;
  return b;
}

std::string point_name(const std::vector<std::uint32_t>& x, std::uint32_t l) {
  std::string s = "p(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ";" + std::to_string(l) + ")";
}

}  // namespace

std::vector<Vertex> LayeredDag::sources() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < size(); ++v)
    if (in[v].empty()) out.push_back(v);
  return out;
}

std::vector<Vertex> LayeredDag::sinks() const {
  std::vector<std::uint8_t> feeds(size(), 0);
  for (const auto& ws : in)
    for (Vertex w : ws) feeds[w] = 1;
  std::vector<Vertex> out;
  for (Vertex v = 0; v < size(); ++v)
    if (!feeds[v]) out.push_back(v);
  return out;
}

std::uint32_t LayeredDag::max_in_degree() const {
  std::size_t m = 0;
  for (const auto& ws : in) m = std::max(m, ws.size());
  return static_cast<std::uint32_t>(m);
}

void LayeredDag::validate() const {
  const auto n = size();
  if (layer.size() != n || in.size() != n) throw StructuralError("DAG tables have different sizes");
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : in[v]) {
      if (w >= n) throw StructuralError("in-neighbour out of range");
      if (layer[w] <= layer[v]) throw StructuralError("edge does not go to a deeper layer");
    }
}

LayeredDag build_pyramid(std::uint32_t d, std::uint32_t h, std::uint64_t max_vertices) {
  if (d < 1) throw StructuralError("pyramid dimension parameter d must be at least 1");
  if (h < 1) throw StructuralError("pyramid height must be at least 1");
  LayeredDag g;
  g.d = d;
  g.height = h;
  std::vector<std::size_t> start(h + 2, 0);
  std::uint64_t total = 0;
  for (std::uint32_t l = 0; l <= h; ++l) {
    std::uint64_t sz = 1;
    for (auto b : layer_bounds(d, l)) {
      sz *= b + 1;
      if (sz > max_vertices) throw CapacityError("pyramid too large");
    }
    total += sz;
    if (total > max_vertices) throw CapacityError("pyramid too large");
  }
  for (std::uint32_t l = 0; l <= h; ++l) {
    start[l] = g.size();
    const auto b = layer_bounds(d, l);
    std::vector<std::uint32_t> x(d, 0);
    for (;;) {
      g.names.push_back(point_name(x, l));
      g.layer.push_back(l);
      g.coords.push_back(x);
      // Lexicographic odometer: last coordinate moves fastest.
      std::int64_t i = static_cast<std::int64_t>(d) - 1;
      while (i >= 0 && x[i] == b[i]) x[i--] = 0;
      if (i < 0) break;
      ++x[i];
    }
  }
  g.in.resize(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const std::uint32_t l = g.layer[v];
    if (l == h) continue;
    auto x = g.coords[v];
    Vertex a = pyramid_vertex(g, x, l + 1);
    ++x[l % d];
    Vertex c = pyramid_vertex(g, x, l + 1);
    g.in[v] = {std::min(a, c), std::max(a, c)};
  }
  return g;
}

Vertex pyramid_vertex(const LayeredDag& p, const std::vector<std::uint32_t>& x, std::uint32_t l) {
  if (l > p.height || x.size() != p.d) throw StructuralError("point outside the pyramid");
  const auto b = layer_bounds(p.d, l);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < p.d; ++i) {
    if (x[i] > b[i]) throw StructuralError("point outside the pyramid");
    idx = idx * (b[i] + 1) + x[i];
  }
  // Layers are contiguous; find the first vertex of layer l.
  auto first = std::lower_bound(p.layer.begin(), p.layer.end(), l) - p.layer.begin();
  return static_cast<Vertex>(first + idx);
}

XorFormula dag_to_xor(const LayeredDag& g) {
  g.validate();
  const auto sinks = g.sinks();
  if (sinks.size() != 1) throw StructuralError("DAG must have exactly one sink");
  XorFormula f(g.names);
  for (Vertex v : g.sources()) f.add_clause({v}, 0);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.in[v].empty()) continue;
    std::vector<Var> raw{v};
    raw.insert(raw.end(), g.in[v].begin(), g.in[v].end());
    f.add_clause(raw, 0);
  }
  f.add_clause({sinks.front()}, 1);
  return f;
}

std::string pyramid_dump(const LayeredDag& g) {
  std::ostringstream out;
  for (Vertex v = 0; v < g.size(); ++v)
    for (Vertex w : g.in[v]) out << g.names[v] << " <- " << g.names[w] << '\n';
  return out.str();
}

bool consistent(const LayeredDag& g, const Labelling& m) {
  const auto sinks = g.sinks();
  for (Vertex z : sinks) {
    auto it = m.find(z);
    if (sinks.size() == 1 && it != m.end() && it->second != 1) return false;
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.in[v].empty()) continue;
    auto it = m.find(v);
    if (it == m.end()) continue;
    std::uint8_t sum = it->second;
    bool all = true;
    for (Vertex w : g.in[v]) {
      auto jt = m.find(w);
      if (jt == m.end()) {
        all = false;
        break;
      }
      sum ^= jt->second;
    }
    if (all && (sum & 1U)) return false;
  }
  return true;
}

std::vector<std::uint8_t> extend_labelling(const LayeredDag& g, const Labelling& m,
                                           std::uint32_t top, const std::vector<Vertex>& s) {
  g.validate();
  if (g.d < 1) throw PreconditionError("labelling extension needs a pyramid");
  for (Vertex v = 0; v < g.size(); ++v) {
    const bool labelled = m.count(v) > 0;
    if (labelled != (g.layer[v] <= top))
      throw PreconditionError("labelling must cover exactly the layers 0.." + std::to_string(top));
  }
  if (!consistent(g, m)) throw PreconditionError("labelling to extend is not consistent");
  for (Vertex v : s) {
    if (v >= g.size()) throw StructuralError("vertex out of range");
    if (g.layer[v] < top + g.d)
      throw PreconditionError("zero-labelled vertex " + g.names[v] + " lies above layer " +
                              std::to_string(top + g.d));
  }
  XorFormula f(g.names);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.in[v].empty()) continue;
    std::vector<Var> raw{v};
    raw.insert(raw.end(), g.in[v].begin(), g.in[v].end());
    f.add_clause(raw, 0);
  }
  for (Vertex z : g.sinks()) f.add_clause({z}, 1);
  Assignment forced(m.begin(), m.end());
  for (Vertex v : s) forced[v] = 0;
  auto model = solve_gf2(f, forced);
  if (!model) throw InfeasibleError("no consistent labelling extends the given one");
  return to_bits(*model, g.size());
}

namespace {

void require_dag_formula(const LayeredDag& g, const XorFormula& f) {
  XorFormula expect = dag_to_xor(g);
  if (f.num_vars != expect.num_vars || f.clauses != expect.clauses)
    throw PreconditionError("formula was not produced from this DAG");
}

}  // namespace

void DagP1::begin(const XorFormula& f, std::uint32_t k) {
  require_dag_formula(g_, f);
  if (k < g_.max_in_degree() + 1)
    throw PreconditionError("DAG strategy needs " + std::to_string(g_.max_in_degree() + 1) + " pebbles");
  have_current_ = false;
}

Move DagP1::next_move(const Assignment& position) {
  Move m;
  if (!have_current_) {
    for (const auto& [v, b] : position) m.deleted.push_back(v);
    m.query = g_.sinks().front();
    return m;
  }
  const auto& ins = g_.in[current_];
  for (const auto& [v, b] : position) {
    (void)b;
    if (v != current_ && !std::binary_search(ins.begin(), ins.end(), v)) m.deleted.push_back(v);
  }
  for (Vertex w : ins)
    if (!position.count(w)) {
      m.query = w;
      return m;
    }
  throw ProtocolError("DAG strategy has nothing to query; the position should already be lost");
}

void DagP1::observe(const Move& move, std::uint8_t answer) {
  if (answer != 1) return;
  if (!have_current_) {
    have_current_ = true;
    current_ = move.query;
    return;
  }
  current_ = move.query;
}

PyramidP2::PyramidP2(LayeredDag p) : p_(std::move(p)) {
  if (p_.d < 2) throw PreconditionError("layer-skipping strategy needs d >= 2");
}

void PyramidP2::begin(const XorFormula& f, std::uint32_t k) {
  require_dag_formula(p_, f);
  notes_.clear();
  if (k > (1U << p_.d))
    notes_.push_back("guarantee void: " + std::to_string(k) + " pebbles exceed 2^d = " +
                     std::to_string(1U << p_.d));
  frontier_ = 0;
  m_.clear();
  m_[p_.sinks().front()] = 1;
}

std::uint8_t PyramidP2::answer(const Assignment& position, Var query) {
  const std::uint32_t l = p_.layer.at(query);
  const std::uint32_t d = p_.d;
  if (l <= frontier_) return m_.at(query);
  if (l >= frontier_ + d) return 0;

  std::set<std::uint32_t> pebbled_layers{l};
  std::vector<Vertex> zeros;
  for (const auto& [v, b] : position) {
    (void)b;
    pebbled_layers.insert(p_.layer[v]);
    if (p_.layer[v] >= frontier_ + d) zeros.push_back(v);
  }
  std::uint32_t next = frontier_ + 1;
  for (;; ++next) {
    auto it = pebbled_layers.upper_bound(next);
    if (it == pebbled_layers.end() || *it > next + d - 1) break;
  }
  next = std::min(next, p_.height);
  std::vector<std::uint8_t> full;
  try {
    full = extend_labelling(p_, m_, frontier_, zeros);
  } catch (const InfeasibleError&) {
    notes_.push_back("labelling extension infeasible at frontier " + std::to_string(frontier_));
    return 0;
  }
  m_.clear();
  for (Vertex v = 0; v < p_.size(); ++v)
    if (p_.layer[v] <= next) m_[v] = full[v];
  frontier_ = next;
  return full[query];
}

}  // namespace xorwl
