#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xorwl/condense.hpp"
#include "xorwl/error.hpp"
#include "xorwl/expander.hpp"
#include "xorwl/harness.hpp"
#include "xorwl/io.hpp"
#include "xorwl/lk_game.hpp"
#include "xorwl/parallel.hpp"
#include "xorwl/pebble.hpp"
#include "xorwl/pyramid.hpp"
#include "xorwl/strategy.hpp"
#include "xorwl/structure.hpp"
#include "xorwl/wl.hpp"

namespace xorwl {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::size_t workers = 1;
  bool timing = false;
  std::uint64_t max_positions = 10'000'000;

  std::uint32_t d = 1;
  std::uint32_t h = 1;
  std::uint32_t left = 16;
  std::uint32_t right = 8;
  std::uint32_t degree = 3;
  std::uint64_t seed = 0;
  std::uint32_t k = 2;
  std::uint32_t k_target = 2;
  std::uint32_t right_size = 0;
  std::uint32_t max_tries = 50;
  bool resample = false;
  std::uint32_t s = 4;
  double c = 2;
  std::string xorf;
  std::string graph;
  std::string structure;
  std::vector<std::string> pair;
  std::string out;
  std::string out_dir;
  std::string format = "csv";
  std::string corpus;
  std::string corpus_name = "small";
  std::string transcript;
  std::string manifest;
  std::string dump;
  double n = 1e6;
  std::uint32_t k_min = 9;
  std::uint32_t k_max = 9;
};

// Raised for problems a user can fix on the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

std::string opt_num(std::optional<std::uint32_t> v, const char* none) {
  return v ? std::to_string(*v) : std::string(none);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0, bool timing) {
  if (!timing) return 0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct Built {
  std::unique_ptr<CLI::App> app;
  std::map<std::string, std::function<int()>> actions;  // keyed by subcommand path
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output file (default: stdout)");
}

Built build(Options& o, std::ostream& out, std::ostream& err) {
  Built b;
  b.app = std::make_unique<CLI::App>("XOR formula, pebble game and Weisfeiler-Leman toolkit", "xorwl");
  auto* app = b.app.get();
  app->set_help_flag("--help", "Print help");
  app->require_subcommand(1);
  app->add_option("--config", o.config, "Flat key=value file; command-line flags take precedence");
  app->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--timing", o.timing, "Fill wallclock_ms fields (otherwise 0 for byte-stable output)");
  app->add_option("--max-positions", o.max_positions, "Capacity guard for solvers")->check(CLI::PositiveNumber);

  auto dh = [&](CLI::App* sub) {
    sub->add_option("-d", o.d, "Pyramid dimension parameter")->required();
    sub->add_option("-h", o.h, "Pyramid height")->required();
  };

  // gen
  auto* gen = app->add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);

  auto* g_pyr = gen->add_subcommand("pyramid", "Pyramid edge list");
  dh(g_pyr);
  add_common(g_pyr, o);
  b.actions["gen pyramid"] = [&] {
    emit(o, out, pyramid_dump(build_pyramid(o.d, o.h)));
    return 0;
  };

  auto* g_pxor = gen->add_subcommand("pyramid-xor", "Pyramid formula in XORF");
  dh(g_pxor);
  add_common(g_pxor, o);
  b.actions["gen pyramid-xor"] = [&] {
    emit(o, out, write_xorf(dag_to_xor(build_pyramid(o.d, o.h))));
    return 0;
  };

  auto* g_exp = gen->add_subcommand("expander", "Random bipartite graph");
  g_exp->add_option("-l,--left", o.left, "Left vertices")->required();
  g_exp->add_option("-m,--right", o.right, "Right vertices")->required();
  g_exp->add_option("-D,--degree", o.degree, "Draws per left vertex")->required();
  g_exp->add_option("--seed", o.seed, "Seed");
  g_exp->add_flag("--resample-until-expander", o.resample, "Try seed, seed+1, ... until the expansion check passes");
  g_exp->add_option("--max-tries", o.max_tries, "Resampling limit");
  g_exp->add_option("-s", o.s, "Expansion set size bound");
  g_exp->add_option("-c", o.c, "Expansion factor");
  add_common(g_exp, o);
  b.actions["gen expander"] = [&] {
    if (o.left == 0 || o.right == 0 || o.degree == 0) throw UsageError("graph sizes must be positive");
    if (!o.resample) {
      emit(o, out, write_graph(sample_graph(o.left, o.right, o.degree, o.seed)));
      return 0;
    }
    std::vector<std::uint64_t> tried;
    for (std::uint32_t i = 0; i < o.max_tries; ++i) {
      auto g = sample_graph(o.left, o.right, o.degree, o.seed + i);
      tried.push_back(o.seed + i);
      if (check_expansion(g, o.s, o.c).pass) {
        err << "seed " << o.seed + i << " passes after " << tried.size() << " tries\n";
        emit(o, out, write_graph(g));
        return 0;
      }
    }
    err << "no expander found in " << o.max_tries << " tries\n";
    return 1;
  };

  auto* g_cond = gen->add_subcommand("condensed", "Pyramid formula substituted over a sampled expander");
  dh(g_cond);
  g_cond->add_option("-D,--degree", o.degree, "Draws per left vertex");
  g_cond->add_option("-k,--k-target", o.k_target, "Expansion is certified for s = 2k");
  g_cond->add_option("--right-size", o.right_size, "Right vertices (0: left^(3/degree))");
  g_cond->add_option("--seed", o.seed, "First seed");
  g_cond->add_option("--max-tries", o.max_tries, "Resampling limit");
  g_cond->add_option("--out-dir", o.out_dir, "Directory for the job artefacts")->required();
  b.actions["gen condensed"] = [&] {
    PipelineParams p{o.d, o.h, o.degree, o.k_target, o.right_size, o.seed, o.max_tries};
    auto job = build_pipeline(p);
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    save_xorf(job.base, (dir / "base.xorf").string());
    write_text_file((dir / "graph.bip").string(), write_graph(job.graph));
    save_xorf(job.product, (dir / "product.xorf").string());
    write_text_file((dir / "a.json").string(), write_structure_json(job.a));
    write_text_file((dir / "b.json").string(), write_structure_json(job.b));
    write_text_file((dir / "manifest.json").string(), pipeline_manifest(job));
    out << "graph seed " << job.graph_seed << ", " << job.product.num_vars << " variables, "
        << job.product.clauses.size() << " clauses\n";
    return 0;
  };

  auto* g_enc = gen->add_subcommand("encode", "Structure pair of a formula");
  g_enc->add_option("--xorf", o.xorf, "Input formula")->required();
  g_enc->add_option("--out-dir", o.out_dir, "Directory receiving a.json and b.json")->required();
  b.actions["gen encode"] = [&] {
    auto [a, bs] = encode(normalize(load_xorf(o.xorf)));
    fs::create_directories(o.out_dir);
    write_text_file((fs::path(o.out_dir) / "a.json").string(), write_structure_json(a));
    write_text_file((fs::path(o.out_dir) / "b.json").string(), write_structure_json(bs));
    return 0;
  };

  auto* g_corpus = gen->add_subcommand("corpus", "Write a built-in corpus with golden values");
  g_corpus->add_option("--name", o.corpus_name, "small | three-pebble | mixed")
      ->check(CLI::IsMember({"small", "three-pebble", "mixed"}));
  g_corpus->add_option("--out-dir", o.out_dir, "Target directory")->required();
  g_corpus->add_option("--seed", o.seed, "Seed for the mixed corpus");
  b.actions["gen corpus"] = [&] {
    std::vector<CorpusInstance> corpus = o.corpus_name == "small"          ? equivalence_corpus()
                                         : o.corpus_name == "three-pebble" ? three_pebble_corpus()
                                                                           : mixed_corpus(o.seed);
    EvalOptions eo;
    eo.max_positions = o.max_positions;
    auto rows = evaluate_corpus(corpus, eo, o.workers);
    record_goldens(corpus, rows);
    write_corpus(o.out_dir, corpus);
    out << corpus.size() << " instances written\n";
    return 0;
  };

  // solve
  auto* solve = app->add_subcommand("solve", "Exact k-pebble game value");
  solve->add_option("--xorf", o.xorf, "Formula")->required();
  solve->add_option("-k", o.k, "Pebbles")->required();
  solve->add_option("--transcript", o.transcript, "Write an optimal-vs-optimal transcript here");
  add_common(solve, o);
  b.actions["solve"] = [&] {
    const auto t0 = std::chrono::steady_clock::now();
    auto f = load_xorf(o.xorf);
    PebbleOptions po{o.max_positions, o.workers};
    auto w = std::make_shared<WinLevels>(solve_pebble_game(f, o.k, po));
    const double ms = elapsed_ms(t0, o.timing);
    emit(o, out, solver_result_json(w->value(), w->space.size(), ms));
    if (!o.transcript.empty()) {
      auto s = extract_strategies(w);
      const std::uint32_t cap = w->value() ? *w->value() : 4 * f.num_vars + 4;
      write_text_file(o.transcript, transcript_json(play(f, o.k, *s.p1, *s.p2, cap)));
    }
    return 0;
  };

  // wl
  auto* wl = app->add_subcommand("wl", "Weisfeiler-Leman refinement");
  wl->add_option("--pair", o.pair, "Two structure JSON files")->expected(2);
  wl->add_option("--structure", o.structure, "One structure JSON file");
  wl->add_option("-k", o.k, "Dimension")->required();
  wl->add_option("--dump", o.dump, "Write the stable colouring as CSV");
  add_common(wl, o);
  b.actions["wl"] = [&] {
    WlOptions wo;
    wo.workers = o.workers;
    nlohmann::ordered_json j;
    if (o.pair.size() == 2) {
      auto a = read_structure_json(read_text_file(o.pair[0]));
      auto bs = read_structure_json(read_text_file(o.pair[1]));
      auto step = wl_distinguish(a, bs, o.k, wo);
      j["k"] = o.k;
      j["steps"] = step ? nlohmann::ordered_json(*step) : nlohmann::ordered_json("none");
    } else if (!o.structure.empty()) {
      auto s = read_structure_json(read_text_file(o.structure));
      auto res = stable_colouring(s, o.k, wo);
      j["k"] = o.k;
      j["steps"] = res.steps;
      j["colours"] = res.colouring.num_colours;
      if (!o.dump.empty()) write_text_file(o.dump, colouring_csv(res.colouring));
    } else {
      throw UsageError("wl needs --pair A B or --structure S");
    }
    emit(o, out, j.dump() + "\n");
    return 0;
  };

  // verify
  auto* verify = app->add_subcommand("verify", "Cross-checks");
  verify->require_subcommand(1);

  auto* v_eq = verify->add_subcommand("equivalence", "Pebble game vs structure game vs WL on a corpus");
  v_eq->add_option("--corpus", o.corpus, "Corpus directory")->required();
  v_eq->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  add_common(v_eq, o);
  b.actions["verify equivalence"] = [&] {
    auto corpus = load_corpus(o.corpus);
    EvalOptions eo;
    eo.timing = o.timing;
    eo.max_positions = o.max_positions;
    std::vector<ReportRow> rows(corpus.size());
    std::vector<std::uint8_t> capped(corpus.size(), 0);
    parallel_for(corpus.size(), o.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          rows[i] = evaluate_instance(corpus[i], eo);
        } catch (const CapacityError&) {
          capped[i] = 1;
          rows[i].id = corpus[i].id;
          rows[i].family = corpus[i].family;
          rows[i].n = corpus[i].formula.num_vars;
          rows[i].k = corpus[i].k;
          rows[i].pebble_rounds = "capacity";
        }
      }
    });
    bool any_cap = false;
    std::vector<ReportRow> done;
    std::vector<CorpusInstance> done_corpus;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (capped[i]) {
        any_cap = true;
        continue;
      }
      done.push_back(rows[i]);
      done_corpus.push_back(corpus[i]);
    }
    emit(o, out, o.format == "json" ? report_json(rows) : report_csv(rows));
    auto sum = check_equivalence(done_corpus, done);
    err << "instances " << rows.size() << ", offset "
        << (sum.offset ? std::to_string(*sum.offset) : std::string("n/a")) << ", "
        << (sum.ok() ? "all checks pass" : "checks FAILED") << '\n';
    for (const auto& p : sum.problems) err << "  " << p << '\n';
    if (any_cap) return static_cast<int>(kExitCapacity);
    return sum.ok() ? 0 : 1;
  };

  auto* v_cond = verify->add_subcommand("condensation", "Round bound across substitution");
  v_cond->add_option("--xorf", o.xorf, "Base formula")->required();
  v_cond->add_option("--graph", o.graph, "Bipartite graph")->required();
  v_cond->add_option("-k", o.k, "Pebbles")->required();
  add_common(v_cond, o);
  b.actions["verify condensation"] = [&] {
    auto f = load_xorf(o.xorf);
    auto g = read_graph(read_text_file(o.graph));
    PebbleOptions po{o.max_positions, o.workers};
    ExpansionOptions eo;
    eo.workers = o.workers;
    auto rep = verify_condensation(f, g, o.k, po, eo);
    emit(o, out, condensation_report_json(rep));
    return rep.holds ? 0 : 1;
  };

  auto* v_exp = verify->add_subcommand("expansion", "Exhaustive boundary expansion check");
  v_exp->add_option("--graph", o.graph, "Bipartite graph")->required();
  v_exp->add_option("-s", o.s, "Set size bound")->required();
  v_exp->add_option("-c", o.c, "Expansion factor")->required();
  add_common(v_exp, o);
  b.actions["verify expansion"] = [&] {
    ExpansionOptions eo;
    eo.workers = o.workers;
    auto rep = check_expansion(read_graph(read_text_file(o.graph)), o.s, o.c, eo);
    emit(o, out, expansion_report_json(rep));
    return rep.pass ? 0 : 1;
  };

  // condense
  auto* cond = app->add_subcommand("condense", "Condensation jobs");
  cond->require_subcommand(1);
  auto* c_replay = cond->add_subcommand("replay", "Rebuild a job from its manifest and compare hashes");
  c_replay->add_option("manifest", o.manifest, "manifest.json")->required();
  b.actions["condense replay"] = [&] {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_text_file(o.manifest));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("manifest: ") + e.what());
    }
    PipelineParams p;
    try {
      const auto& q = m.at("params");
      p.d = q.at("d");
      p.h = q.at("h");
      p.degree = q.at("degree");
      p.k_target = q.at("k_target");
      p.right_size = q.at("right_size");
      p.seed = q.at("seed");
      p.max_tries = q.at("max_tries");
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("manifest params: ") + e.what());
    }
    auto job = build_pipeline(p);
    const std::string again = pipeline_manifest(job);
    const bool same = nlohmann::json::parse(again) == m;
    out << (same ? "replay identical\n" : "replay differs\n");
    if (!same) err << again;
    return same ? 0 : 1;
  };

  auto* c_params = cond->add_subcommand("params", "Sizes implied by the asymptotic parameter schedule");
  c_params->add_option("-n", o.n, "Variables of the target formula")->required();
  c_params->add_option("--k-min", o.k_min, "Smaller pebble count")->required();
  c_params->add_option("--k-max", o.k_max, "Larger pebble count")->required();
  add_common(c_params, o);
  b.actions["condense params"] = [&] {
    emit(o, out, schedule_report_json(schedule_parameters(o.n, o.k_min, o.k_max)));
    return 0;
  };
  return b;
}

std::string active_path(const CLI::App& app) {
  std::string path;
  const CLI::App* cur = &app;
  while (true) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    path += (path.empty() ? "" : " ") + cur->get_name();
  }
  return path;
}

CLI::App* deepest(CLI::App* app) {
  while (!app->get_subcommands().empty()) app = app->get_subcommands().front();
  return app;
}

// Reads `key = value` lines; `#` and `;` start comments.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key=value");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

// The probe pass must succeed even when the config supplies required values.
void relax(CLI::App* app) {
  for (CLI::Option* opt : app->get_options()) opt->required(false);
  for (CLI::App* sub : app->get_subcommands({})) relax(sub);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string help_path;
  try {
    std::vector<std::string> argv = args;
    {
      // First pass only to learn the subcommand and the config path.
      Options probe;
      std::ostringstream sink;
      Built b = build(probe, sink, sink);
      relax(b.app.get());
      std::vector<std::string> rev(argv.rbegin(), argv.rend());
      try {
        b.app->parse(rev);
      } catch (const CLI::CallForHelp&) {
        help_path = active_path(*b.app);
        throw;
      }
      if (!probe.config.empty()) {
        CLI::App* leaf = deepest(b.app.get());
        for (const auto& [key, value] : read_flat_config(probe.config)) {
          const std::string flag = key.size() == 1 ? "-" + key : "--" + key;
          CLI::Option* opt = leaf->get_option_no_throw(flag);
          if (opt == nullptr) opt = b.app->get_option_no_throw(flag);
          if (opt == nullptr) throw UsageError("config key '" + key + "' is not an option of this command");
          if (opt->count() > 0) continue;  // flags win
          if (opt->get_type_size() == 0) {
            if (value == "true" || value == "1") argv.push_back(flag);
          } else {
            argv.push_back(flag);
            argv.push_back(value);
          }
        }
      }
    }
    Options o;
    Built b = build(o, out, err);
    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    b.app->parse(rev);
    const std::string path = active_path(*b.app);
    auto it = b.actions.find(path);
    if (it == b.actions.end()) throw UsageError("no action for '" + path + "'");
    return it->second();
  } catch (const CLI::CallForHelp&) {
    Options o;
    std::ostringstream sink;
    Built b = build(o, sink, sink);
    CLI::App* app = b.app.get();
    std::istringstream names(help_path);
    for (std::string name; names >> name;) app = app->get_subcommand(name);
    out << app->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ExpanderNotFound& e) {
    err << "expander not found: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolation;
  }
}

}  // namespace xorwl
