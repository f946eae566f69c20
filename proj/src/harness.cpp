#include "xorwl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xorwl/error.hpp"
#include "xorwl/io.hpp"
#include "xorwl/lk_game.hpp"
#include "xorwl/parallel.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/rng.hpp"
#include "xorwl/structure.hpp"
#include "xorwl/wl.hpp"

namespace xorwl {

namespace {

CorpusInstance make(std::string id, std::string family, XorFormula f, std::uint32_t k) {
  CorpusInstance c;
  c.id = std::move(id);
  c.family = std::move(family);
  c.formula = std::move(f);
  c.k = k;
  return c;
}

// x0 = head, x_i + x_{i+1} = 0, x_{n-1} = tail with head != tail.
XorFormula chain(std::uint32_t n) {
  XorFormula f(n);
  f.add_clause({0}, 1);
  for (Var i = 0; i + 1 < n; ++i) f.add_clause({i, i + 1}, 0);
  f.add_clause({n - 1}, 0);
  return f;
}

XorFormula odd_cycle(std::uint32_t n) {
  XorFormula f(n);
  for (Var i = 0; i < n; ++i) f.add_clause({i, (i + 1) % n}, i + 1 == n ? 1 : 0);
  return f;
}

// Two unit clauses joined by a path with random edge parities; the tail
// unit is chosen to make the whole system unsatisfiable.
XorFormula twisted_chain(std::uint32_t n, Rng& rng) {
  XorFormula f(n);
  std::uint8_t acc = static_cast<std::uint8_t>(rng.coin());
  f.add_clause({0}, acc);
  for (Var i = 0; i + 1 < n; ++i) {
    const std::uint8_t p = static_cast<std::uint8_t>(rng.coin());
    acc ^= p;
    f.add_clause({i, i + 1}, p);
  }
  f.add_clause({n - 1}, acc ^ 1U);
  return f;
}

XorFormula star(std::uint32_t n) {
  XorFormula f(n);
  f.add_clause({0}, 1);
  for (Var i = 1; i < n; ++i) f.add_clause({0, i}, 0);
  f.add_clause({n - 1}, 0);
  return f;
}

XorFormula random_formula(Rng& rng, std::uint32_t n, std::uint32_t m, std::uint32_t max_width) {
  XorFormula f(n);
  for (std::uint32_t c = 0; c < m; ++c) {
    const std::uint32_t w = 1 + static_cast<std::uint32_t>(rng.below(std::min(max_width, n)));
    std::set<Var> vars;
    while (vars.size() < w) vars.insert(static_cast<Var>(rng.below(n)));
    f.add_clause(std::vector<Var>(vars.begin(), vars.end()), static_cast<std::uint8_t>(rng.coin()));
  }
  return f;
}

std::string num_or(std::optional<std::uint32_t> v, const char* none) {
  return v ? std::to_string(*v) : std::string(none);
}

}  // namespace

std::vector<CorpusInstance> equivalence_corpus() {
  std::vector<CorpusInstance> out;
  {
    XorFormula f(1);
    f.add_clause({0}, 0);
    f.add_clause({0}, 1);
    out.push_back(make("unit-contradiction", "unit", f, 2));
  }
  for (std::uint32_t n = 2; n <= 8; ++n) out.push_back(make("chain-" + std::to_string(n), "chain", chain(n), 2));
  for (std::uint32_t n = 3; n <= 8; n += 1) out.push_back(make("star-" + std::to_string(n), "star", star(n), 2));
  Rng rng(derive_seed(2024, "twisted"));
  for (std::uint32_t n = 3; n <= 8; n += 1)
    out.push_back(make("twisted-" + std::to_string(n), "twisted-chain", twisted_chain(n, rng), 2));
  for (std::uint32_t n = 3; n <= 7; n += 2)
    out.push_back(make("odd-cycle-" + std::to_string(n), "odd-cycle", odd_cycle(n), 2));
  Rng rr(derive_seed(2024, "random-2xor"));
  for (std::uint32_t i = 0; i < 6; ++i) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rr.below(6));
    for (;;) {
      XorFormula f = random_formula(rr, n, n + 2, 2);
      if (!solve_gf2(f)) {
        out.push_back(make("random2-" + std::to_string(i), "random-2xor", f, 2));
        break;
      }
    }
  }
  {
    auto p = build_pyramid(1, 1);
    auto c = make("pyramid-1-1", "pyramid-xor", dag_to_xor(p), 2);
    c.d = 1;
    c.h = 1;
    out.push_back(c);
  }
  return out;
}

std::vector<CorpusInstance> three_pebble_corpus() {
  std::vector<CorpusInstance> out;
  {
    auto c = make("pyramid-1-1", "pyramid-xor", dag_to_xor(build_pyramid(1, 1)), 3);
    c.d = c.h = 1;
    out.push_back(c);
  }
  {
    XorFormula f(2);
    f.add_clause({0, 1}, 0);
    f.add_clause({0, 1}, 1);
    out.push_back(make("pair-contradiction", "pair", f, 3));
  }
  {
    XorFormula f(1);
    f.add_clause({0}, 0);
    f.add_clause({0}, 1);
    out.push_back(make("unit-contradiction", "unit", f, 3));
  }
  for (std::uint32_t n = 3; n <= 6; ++n) out.push_back(make("chain-" + std::to_string(n), "chain", chain(n), 3));
  out.push_back(make("odd-cycle-5", "odd-cycle", odd_cycle(5), 3));
  Rng rr(derive_seed(2024, "random-3xor"));
  for (std::uint32_t i = 0; i < 4; ++i) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rr.below(3));
    for (;;) {
      XorFormula f = random_formula(rr, n, n + 1, 3);
      if (!solve_gf2(f)) {
        out.push_back(make("random3-" + std::to_string(i), "random-3xor", f, 3));
        break;
      }
    }
  }
  return out;
}

std::vector<CorpusInstance> mixed_corpus(std::uint64_t seed) {
  std::vector<CorpusInstance> out;
  Rng rng(derive_seed(seed, "mixed"));
  for (std::uint32_t i = 0; i < 60; ++i) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(8));
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(n + 2));
    auto c = make("mixed-" + std::to_string(i), "random", random_formula(rng, n, m, 3), 2);
    c.seed = seed;
    out.push_back(std::move(c));
  }
  for (std::uint32_t h = 1; h <= 2; ++h) {
    auto c = make("pyramid-1-" + std::to_string(h), "pyramid-xor", dag_to_xor(build_pyramid(1, h)), 3);
    c.d = 1;
    c.h = h;
    out.push_back(c);
  }
  return out;
}

ReportRow evaluate_instance(const CorpusInstance& inst, const EvalOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ReportRow row;
  row.id = inst.id;
  row.family = inst.family;
  row.n = inst.formula.num_vars;
  row.d = inst.d;
  row.h = inst.h;
  row.k = inst.k;
  const bool sat = solve_gf2(inst.formula).has_value();
  row.sat = sat ? "true" : "false";
  const XorFormula nf = normalize(inst.formula);
  const bool encodable = std::all_of(nf.clauses.begin(), nf.clauses.end(), [](const XorClause& c) { return c.width() > 0; });
  PebbleOptions popts;
  popts.max_positions = opts.max_positions;
  popts.workers = opts.workers;
  if (opts.pebble) row.pebble_rounds = num_or(pebble_value(inst.formula, inst.k, popts), "nowin");
  if (encodable && (opts.wl || opts.lk || opts.iso)) {
    auto [a, b] = encode(nf);
    if (opts.wl && inst.k >= 2) {
      WlOptions wopts;
      wopts.workers = opts.workers;
      row.wl_steps = num_or(wl_distinguish(a, b, inst.k - 1, wopts), "none");
    }
    if (opts.lk) row.lk_rounds = num_or(solve_lk_game(a, b, inst.k).rounds, "none");
    if (opts.iso) row.iso = find_isomorphism(a, b).has_value() ? "true" : "false";
  }
  if (opts.timing)
    row.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<ReportRow> evaluate_corpus(const std::vector<CorpusInstance>& corpus, const EvalOptions& opts,
                                       std::size_t workers) {
  std::vector<ReportRow> rows(corpus.size());
  parallel_for(corpus.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) rows[i] = evaluate_instance(corpus[i], opts);
  });
  return rows;
}

std::string report_header() { return "id,family,n,d,h,k,pebble_rounds,wl_steps,lk_rounds,sat,iso,wallclock_ms"; }

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << report_header() << '\n';
  for (const auto& r : rows) {
    out << r.id << ',' << r.family << ',' << r.n << ',' << r.d << ',' << r.h << ',' << r.k << ',' << r.pebble_rounds
        << ',' << r.wl_steps << ',' << r.lk_rounds << ',' << r.sat << ',' << r.iso << ',' << r.wallclock_ms << '\n';
  }
  return out.str();
}

std::string report_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["family"] = r.family;
    o["n"] = r.n;
    o["d"] = r.d;
    o["h"] = r.h;
    o["k"] = r.k;
    o["pebble_rounds"] = r.pebble_rounds;
    o["wl_steps"] = r.wl_steps;
    o["lk_rounds"] = r.lk_rounds;
    o["sat"] = r.sat;
    o["iso"] = r.iso;
    o["wallclock_ms"] = r.wallclock_ms;
    arr.push_back(std::move(o));
  }
  return arr.dump(1) + "\n";
}

EquivalenceSummary check_equivalence(const std::vector<CorpusInstance>& corpus, const std::vector<ReportRow>& rows) {
  EquivalenceSummary s;
  auto problem = [&](const ReportRow& r, const std::string& what) { s.problems.push_back(r.id + ": " + what); };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool peb_nowin = r.pebble_rounds == "nowin";
    if (!r.lk_rounds.empty() && !r.pebble_rounds.empty()) {
      const bool lk_none = r.lk_rounds == "none";
      if (lk_none != peb_nowin || (!lk_none && r.lk_rounds != r.pebble_rounds)) {
        s.lk_matches = false;
        problem(r, "structure game " + r.lk_rounds + " vs pebble game " + r.pebble_rounds);
      }
    }
    if (!r.wl_steps.empty() && !r.pebble_rounds.empty()) {
      const bool wl_none = r.wl_steps == "none";
      if (wl_none != peb_nowin) {
        s.nowin_agrees = false;
        problem(r, "WL " + r.wl_steps + " vs pebble game " + r.pebble_rounds);
      } else if (!wl_none) {
        const int delta = std::stoi(r.pebble_rounds) - std::stoi(r.wl_steps);
        if (!s.offset) s.offset = delta;
        else if (*s.offset != delta) {
          s.offset_constant = false;
          problem(r, "offset " + std::to_string(delta) + " differs from " + std::to_string(*s.offset));
        }
        if (delta < -1 || delta > 1) s.offset_in_range = false;
      }
    }
    if (r.sat == "true" && ((!r.pebble_rounds.empty() && !peb_nowin) || r.iso == "false")) {
      s.invariants_hold = false;
      problem(r, "satisfiable but won or non-isomorphic");
    }
    if (r.sat == "false" && r.iso == "true") {
      s.invariants_hold = false;
      problem(r, "unsatisfiable but isomorphic");
    }
    if (i < corpus.size()) {
      const Golden& g = corpus[i].golden;
      auto cmp = [&](const std::optional<std::string>& want, const std::string& got, const char* what) {
        if (want && !got.empty() && *want != got) {
          s.goldens_match = false;
          problem(r, std::string(what) + " " + got + " differs from recorded " + *want);
        }
      };
      cmp(g.pebble_rounds, r.pebble_rounds, "pebble_rounds");
      cmp(g.wl_steps, r.wl_steps, "wl_steps");
      cmp(g.lk_rounds, r.lk_rounds, "lk_rounds");
      if (g.sat) cmp(std::string(*g.sat ? "true" : "false"), r.sat, "sat");
      if (g.iso) cmp(std::string(*g.iso ? "true" : "false"), r.iso, "iso");
    }
  }
  return s;
}

void record_goldens(std::vector<CorpusInstance>& corpus, const std::vector<ReportRow>& rows) {
  for (std::size_t i = 0; i < corpus.size() && i < rows.size(); ++i) {
    auto& g = corpus[i].golden;
    const auto& r = rows[i];
    if (!r.pebble_rounds.empty()) g.pebble_rounds = r.pebble_rounds;
    if (!r.wl_steps.empty()) g.wl_steps = r.wl_steps;
    if (!r.lk_rounds.empty()) g.lk_rounds = r.lk_rounds;
    g.sat = r.sat == "true";
    if (!r.iso.empty()) g.iso = r.iso == "true";
  }
}

void write_corpus(const std::string& dir, const std::vector<CorpusInstance>& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string index;
  for (const auto& c : corpus) index += c.id + "\n";
  write_text_file((fs::path(dir) / "index.txt").string(), index);
  for (const auto& c : corpus) {
    const fs::path sub = fs::path(dir) / c.id;
    fs::create_directories(sub);
    const std::string xorf = write_xorf(c.formula);
    write_text_file((sub / "formula.xorf").string(), xorf);
    nlohmann::ordered_json j;
    j["id"] = c.id;
    j["family"] = c.family;
    j["n"] = c.formula.num_vars;
    j["d"] = c.d;
    j["h"] = c.h;
    j["k"] = c.k;
    j["seed"] = c.seed;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(xorf)));
    j["formula_fnv1a"] = buf;
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    if (c.golden.pebble_rounds) g["pebble_rounds"] = *c.golden.pebble_rounds;
    if (c.golden.wl_steps) g["wl_steps"] = *c.golden.wl_steps;
    if (c.golden.lk_rounds) g["lk_rounds"] = *c.golden.lk_rounds;
    if (c.golden.sat) g["sat"] = *c.golden.sat;
    if (c.golden.iso) g["iso"] = *c.golden.iso;
    j["golden"] = g;
    write_text_file((sub / "manifest.json").string(), j.dump(1) + "\n");
  }
}

std::vector<CorpusInstance> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FormatError("corpus directory " + dir + " not found");
  // index.txt fixes the instance order; without it, directory names are sorted.
  std::vector<fs::path> subs;
  const fs::path index = fs::path(dir) / "index.txt";
  if (fs::exists(index)) {
    std::istringstream in(read_text_file(index.string()));
    std::string id;
    while (std::getline(in, id))
      if (!id.empty()) subs.push_back(fs::path(dir) / id);
  } else {
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_directory() && fs::exists(e.path() / "manifest.json")) subs.push_back(e.path());
    std::sort(subs.begin(), subs.end());
  }
  std::vector<CorpusInstance> out;
  for (const auto& sub : subs) {
    CorpusInstance c;
    try {
      auto j = nlohmann::json::parse(read_text_file((sub / "manifest.json").string()));
      c.id = j.value("id", sub.filename().string());
      c.family = j.value("family", std::string("unknown"));
      c.k = j.value("k", 2U);
      c.d = j.value("d", 0U);
      c.h = j.value("h", 0U);
      c.seed = j.value("seed", std::uint64_t{0});
      if (j.contains("golden")) {
        const auto& g = j["golden"];
        if (g.contains("pebble_rounds")) c.golden.pebble_rounds = g["pebble_rounds"].get<std::string>();
        if (g.contains("wl_steps")) c.golden.wl_steps = g["wl_steps"].get<std::string>();
        if (g.contains("lk_rounds")) c.golden.lk_rounds = g["lk_rounds"].get<std::string>();
        if (g.contains("sat")) c.golden.sat = g["sat"].get<bool>();
        if (g.contains("iso")) c.golden.iso = g["iso"].get<bool>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(sub.string() + "/manifest.json: " + e.what());
    }
    c.formula = load_xorf((sub / "formula.xorf").string());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace xorwl
