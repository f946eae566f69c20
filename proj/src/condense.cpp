#include "xorwl/condense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "xorwl/error.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/rng.hpp"

namespace xorwl {

XorFormula xorify(const XorFormula& f, const BipartiteGraph& g) {
  f.validate();
  g.validate();
  if (g.left != f.num_vars)
    throw PreconditionError("graph has " + std::to_string(g.left) + " left vertices but the formula has " +
                            std::to_string(f.num_vars) + " variables");
  for (LeftVertex u = 0; u < g.left; ++u)
    if (g.nbr[u].empty()) throw PreconditionError("left vertex " + std::to_string(u) + " is isolated");
  XorFormula h(g.right);
  for (const auto& c : f.clauses) {
    std::vector<Var> raw;
    for (Var u : c.raw_vars) raw.insert(raw.end(), g.nbr[u].begin(), g.nbr[u].end());
    h.add_clause(std::move(raw), c.parity);
  }
  return h;
}

std::vector<std::uint8_t> induced_assignment(const BipartiteGraph& g, const std::vector<std::uint8_t>& beta) {
  std::vector<std::uint8_t> alpha(g.left, 0);
  for (LeftVertex u = 0; u < g.left; ++u)
    for (RightVertex v : g.nbr[u]) alpha[u] ^= beta.at(v) & 1U;
  return alpha;
}

bool consistency_check(const Assignment& alpha, const Assignment& beta, const BipartiteGraph& g) {
  XorFormula sys(g.right);
  for (const auto& [u, bit] : alpha) {
    if (u >= g.left) throw StructuralError("left vertex out of range");
    sys.add_clause(g.nbr[u], bit);
  }
  for (const auto& [v, bit] : beta)
    if (v >= g.right) throw StructuralError("right vertex out of range");
  return solve_gf2(sys, beta).has_value();
}

void LiftedP1::begin(const XorFormula& f, std::uint32_t k) {
  XorFormula expect = xorify(base_, g_);
  if (f.num_vars != expect.num_vars || f.clauses != expect.clauses)
    throw PreconditionError("formula is not the substitution of the base formula");
  budget_ = k;
  inner_->begin(base_, inner_k_);
  alpha_.clear();
  board_.clear();
  pending_ = false;
  queue_.clear();
  high_water_ = 0;
}

void LiftedP1::settle(const Assignment& position) {
  board_ = position;
  // Resolve inner moves whose neighbourhood is already on the board; each
  // turn of this loop feeds one answer to the inner strategy.
  for (std::uint32_t guard = 0; !pending_; ++guard) {
    if (guard > g_.left + 1) throw ProtocolError("lifted strategy is not making progress");
    inner_move_ = inner_->next_move(alpha_);
    for (Var u : inner_move_.deleted) alpha_.erase(u);
    const Var u = inner_move_.query;
    queue_.clear();
    for (RightVertex v : g_.nbr.at(u))
      if (!board_.count(v)) queue_.push_back(v);
    if (!queue_.empty()) {
      pending_ = true;
      break;
    }
    std::uint8_t parity = 0;
    for (RightVertex v : g_.nbr[u]) parity ^= board_.at(v);
    alpha_[u] = parity;
    inner_->observe(inner_move_, parity);
  }
}

Move LiftedP1::next_move(const Assignment& position) {
  if (!pending_) settle(position);
  else board_ = position;
  std::vector<Var> keep;
  for (const auto& [u, b] : alpha_) {
    (void)b;
    keep.insert(keep.end(), g_.nbr[u].begin(), g_.nbr[u].end());
  }
  keep.insert(keep.end(), g_.nbr[inner_move_.query].begin(), g_.nbr[inner_move_.query].end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.size() > budget_)
    throw ProtocolError("lifted strategy needs " + std::to_string(keep.size()) + " pebbles, budget is " +
                        std::to_string(budget_));
  Move m;
  for (const auto& [v, b] : board_) {
    (void)b;
    if (!std::binary_search(keep.begin(), keep.end(), v)) m.deleted.push_back(v);
  }
  m.query = queue_.front();
  return m;
}

void LiftedP1::observe(const Move& move, std::uint8_t answer) {
  for (Var v : move.deleted) board_.erase(v);
  board_[move.query] = answer;
  high_water_ = std::max(high_water_, board_.size());
  if (queue_.empty() || queue_.front() != move.query) throw ProtocolError("lifted strategy lost track of its queries");
  queue_.erase(queue_.begin());
  if (!queue_.empty()) return;
  const Var u = inner_move_.query;
  std::uint8_t parity = 0;
  for (RightVertex v : g_.nbr[u]) parity ^= board_.at(v);
  alpha_[u] = parity;
  pending_ = false;
  inner_->observe(inner_move_, parity);
}

CondensationReport verify_condensation(const XorFormula& f, const BipartiteGraph& g, std::uint32_t k,
                                       PebbleOptions popts, ExpansionOptions eopts) {
  CondensationReport rep;
  rep.k = k;
  const auto exp = check_expansion(g, 2 * k, 2, eopts);
  if (!exp.pass) {
    rep.skipped = true;
    rep.reason = "graph is not a (" + std::to_string(2 * k) + ",2)-boundary expander";
    return rep;
  }
  rep.r_base = pebble_value(f, k, popts);
  rep.r_substituted = pebble_value(xorify(f, g), k, popts);
  if (!rep.r_base) {
    rep.reason = "base formula is never won; ratio check skipped";
    return rep;
  }
  rep.bound = (*rep.r_base + 2 * k - 1) / (2 * k);
  rep.holds = !rep.r_substituted || *rep.r_substituted >= rep.bound;
  return rep;
}

std::string condensation_report_json(const CondensationReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["skipped"] = r.skipped;
  j["reason"] = r.reason;
  auto val = [](const std::optional<std::uint32_t>& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return "nowin";
  };
  j["r_base"] = val(r.r_base);
  j["r_substituted"] = val(r.r_substituted);
  j["bound"] = r.bound;
  j["holds"] = r.holds;
  return j.dump() + "\n";
}

std::uint32_t default_right_size(std::uint32_t left, std::uint32_t degree) {
  if (degree == 0) throw StructuralError("degree must be positive");
  const double m = std::ceil(std::pow(static_cast<double>(left), 3.0 / degree) - 1e-9);
  return static_cast<std::uint32_t>(std::max(1.0, m));
}

namespace {

PipelineJob finish_pipeline(const PipelineParams& p, XorFormula base, BipartiteGraph g) {
  PipelineJob job;
  job.params = p;
  job.base = std::move(base);
  job.graph = std::move(g);
  job.product = xorify(job.base, job.graph);
  auto [a, b] = encode(normalize(job.product));
  job.a = std::move(a);
  job.b = std::move(b);
  return job;
}

}  // namespace

PipelineJob build_pipeline(const PipelineParams& p, ExpansionOptions eopts) {
  XorFormula base = dag_to_xor(build_pyramid(p.d, p.h));
  const std::uint32_t right = p.right_size ? p.right_size : default_right_size(base.num_vars, p.degree);
  std::vector<std::uint64_t> tried;
  for (std::uint32_t i = 0; i < p.max_tries; ++i) {
    const std::uint64_t seed = p.seed + i;
    tried.push_back(seed);
    BipartiteGraph g = sample_graph(base.num_vars, right, p.degree, seed);
    if (!check_expansion(g, 2 * p.k_target, 2, eopts).pass) continue;
    PipelineJob job = finish_pipeline(p, std::move(base), std::move(g));
    job.graph_seed = seed;
    job.seeds_tried = std::move(tried);
    job.params.right_size = right;
    return job;
  }
  throw ExpanderNotFound("no (" + std::to_string(2 * p.k_target) + ",2)-boundary expander in " +
                             std::to_string(p.max_tries) + " tries",
                         tried);
}

PipelineJob build_pipeline(const PipelineParams& p, const BipartiteGraph& g) {
  PipelineJob job = finish_pipeline(p, dag_to_xor(build_pyramid(p.d, p.h)), g);
  job.params.right_size = g.right;
  job.params.degree = g.delta;
  return job;
}

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

std::string pipeline_manifest(const PipelineJob& job) {
  nlohmann::ordered_json j;
  const auto& p = job.params;
  j["kind"] = "condensed";
  j["params"] = {{"d", p.d}, {"h", p.h}, {"degree", p.degree}, {"k_target", p.k_target},
                 {"right_size", p.right_size}, {"seed", p.seed}, {"max_tries", p.max_tries}};
  j["graph_seed"] = job.graph_seed;
  j["seeds_tried"] = job.seeds_tried;
  j["sizes"] = {{"base_vars", job.base.num_vars}, {"base_clauses", job.base.clauses.size()},
                {"product_vars", job.product.num_vars}, {"product_clauses", job.product.clauses.size()}};
  j["hashes"] = {{"base", hex64(fnv1a64(write_xorf(job.base)))},
                 {"graph", hex64(fnv1a64(write_graph(job.graph)))},
                 {"product", hex64(fnv1a64(write_xorf(job.product)))},
                 {"structure_a", hex64(fnv1a64(write_structure_json(job.a)))},
                 {"structure_b", hex64(fnv1a64(write_structure_json(job.b)))}};
  j["symbolic_constants"] = {"epsilon", "k0", "delta0"};
  return j.dump(1) + "\n";
}

ScheduleReport schedule_parameters(double n, std::uint32_t k_min, std::uint32_t k_max) {
  if (n < 2 || k_min == 0 || k_max < k_min) throw PreconditionError("need n >= 2 and 1 <= k_min <= k_max");
  ScheduleReport r;
  r.n = n;
  r.k_min = k_min;
  r.k_max = k_max;
  r.l_max = k_max;
  r.s = 2 * r.l_max;
  r.delta = 3 * (k_min / 9);
  r.log2_m = (k_min / 9) * std::log2(n);
  const double logl = std::ceil(std::log2(static_cast<double>(r.l_max)));
  const double L = std::max(1.0, logl);
  r.r = std::exp2(r.log2_m / (1 + L)) / L - 2;
  r.log2_h_vars = r.delta ? 3.0 * r.log2_m / r.delta : 0;
  r.pyramid_d = static_cast<std::uint32_t>(L);
  r.pyramid_h = std::floor(std::exp2(r.log2_m / (r.pyramid_d + 1))) - 1;
  r.k_range_ok = k_max <= std::pow(n, 1.0 / 6) / k_min;
  r.delta_positive = r.delta > 0;
  r.delta_ratio_ok = r.delta_positive && r.delta <= static_cast<double>(r.l_max) / r.l_min;
  r.size_ok = r.delta_positive && 2.0 * r.delta * std::log2(2.0 * r.l_max * r.delta) <= r.log2_m;
  return r;
}

std::string schedule_report_json(const ScheduleReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["k_min"] = r.k_min;
  j["k_max"] = r.k_max;
  j["l_min"] = r.l_min;
  j["l_max"] = r.l_max;
  j["p"] = r.p;
  j["delta"] = r.delta;
  j["s"] = r.s;
  j["log2_m"] = r.log2_m;
  j["rounds_lower_bound"] = r.r;
  j["log2_substituted_vars"] = r.log2_h_vars;
  j["pyramid_d"] = r.pyramid_d;
  j["pyramid_h"] = r.pyramid_h;
  j["checks"] = {{"k_range", r.k_range_ok}, {"delta_positive", r.delta_positive},
                 {"delta_ratio", r.delta_ratio_ok}, {"expander_size", r.size_ok}};
  return j.dump(1) + "\n";
}

}  // namespace xorwl
