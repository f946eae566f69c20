#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "xorwl/io.hpp"

using namespace xorwl;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "xorwl_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("gen pyramid-xor writes the P1_1 formula") {
  auto r = run({"gen", "pyramid-xor", "-d", "1", "-h", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "xorf 3 4\n# name 0 p(0;0)\n# name 1 p(0;1)\n# name 2 p(1;1)\n1 | 0\n2 | 0\n0 1 2 | 0\n0 | 1\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"gen", "pyramid", "-d", "0", "-h", "1"}).code == 2);
  CHECK(run({"gen", "pyramid", "-d", "1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"solve", "--xorf", scratch("missing.xorf").string(), "-k", "2"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  auto help = run({"gen", "pyramid", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Pyramid height") != std::string::npos);
}

TEST_CASE("solve reports the value and a transcript") {
  auto f = scratch("p11.xorf");
  auto t = scratch("p11.json");
  REQUIRE(run({"gen", "pyramid-xor", "-d", "1", "-h", "1", "--out", f.string()}).code == 0);
  auto r = run({"solve", "--xorf", f.string(), "-k", "3", "--transcript", t.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"value\":\"rounds\",\"r\":3,\"positions_explored\":27,\"wallclock_ms\":0.0}\n");
  CHECK(read_text_file(t.string()).find("\"round\":3") != std::string::npos);
  auto capped = run({"--max-positions", "5", "solve", "--xorf", f.string(), "-k", "3"});
  CHECK(capped.code == 3);
}

TEST_CASE("gen expander is reproducible") {
  auto a = run({"gen", "expander", "-l", "16", "-m", "8", "-D", "3", "--seed", "7"});
  auto b = run({"gen", "expander", "-l", "16", "-m", "8", "-D", "3", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("bip 16 8 3\n", 0) == 0);
}

TEST_CASE("wl on the contradictory unit pair") {
  auto f = scratch("unit.xorf");
  write_text_file(f.string(), "xorf 1 2\n0 | 0\n0 | 1\n");
  auto dir = scratch("unit_enc");
  REQUIRE(run({"gen", "encode", "--xorf", f.string(), "--out-dir", dir.string()}).code == 0);
  auto r = run({"wl", "--pair", (dir / "a.json").string(), (dir / "b.json").string(), "-k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"k\":1,\"steps\":0}\n");
}

TEST_CASE("config files fill missing flags and lose to explicit ones") {
  auto cfg = scratch("gen.cfg");
  write_text_file(cfg.string(), "# pyramid parameters\nd = 2\nh = 2\n");
  auto from_cfg = run({"--config", cfg.string(), "gen", "pyramid-xor"});
  auto direct = run({"gen", "pyramid-xor", "-d", "2", "-h", "2"});
  CHECK(from_cfg.code == 0);
  CHECK(from_cfg.out == direct.out);
  auto override = run({"--config", cfg.string(), "gen", "pyramid-xor", "-h", "1"});
  CHECK(override.out == run({"gen", "pyramid-xor", "-d", "2", "-h", "1"}).out);

  write_text_file(cfg.string(), "bogus = 1\n");
  CHECK(run({"--config", cfg.string(), "gen", "pyramid-xor", "-d", "1", "-h", "1"}).code == 2);
  write_text_file(cfg.string(), "no equals sign\n");
  CHECK(run({"--config", cfg.string(), "gen", "pyramid-xor", "-d", "1", "-h", "1"}).code == 2);
}

TEST_CASE("verify equivalence on a freshly generated corpus") {
  auto dir = scratch("corpus");
  fs::remove_all(dir);
  REQUIRE(run({"gen", "corpus", "--name", "small", "--out-dir", dir.string()}).code == 0);
  auto r = run({"verify", "equivalence", "--corpus", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("offset 1") != std::string::npos);
  auto again = run({"--workers", "4", "verify", "equivalence", "--corpus", dir.string()});
  CHECK(again.out == r.out);
  auto capped = run({"--max-positions", "3", "verify", "equivalence", "--corpus", dir.string()});
  CHECK(capped.code == 3);
  CHECK(capped.out.find("capacity") != std::string::npos);
}

TEST_CASE("verify expansion exit codes") {
  auto g = scratch("pair.bip");
  write_text_file(g.string(), "bip 2 1 1\n0\n0\n");
  auto r = run({"verify", "expansion", "--graph", g.string(), "-s", "2", "-c", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.find("\"witness\":[0,1]") != std::string::npos);
  write_text_file(g.string(), "bip 2 2 1\n0\n1\n");
  CHECK(run({"verify", "expansion", "--graph", g.string(), "-s", "2", "-c", "1"}).code == 0);
}

TEST_CASE("condensed jobs replay") {
  auto dir = scratch("job");
  fs::remove_all(dir);
  auto r = run({"gen", "condensed", "-d", "1", "-h", "2", "-k", "1", "--right-size", "30", "--seed", "3", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(run({"condense", "replay", (dir / "manifest.json").string()}).code == 0);
  CHECK(run({"condense", "params", "-n", "1e12", "--k-min", "9", "--k-max", "9"}).code == 0);
}
