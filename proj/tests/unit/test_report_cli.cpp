#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fraclp/commands.hpp"
#include "fraclp/report.hpp"

using namespace fraclp;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fraclp-unit-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("report") {
  TEST_CASE("shortest round-trip formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1.0) == "1");
    CHECK(std::stod(fmt(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(fmt(-2.5e-300) == "-2.5e-300");
  }

  TEST_CASE("csv tables") {
    CsvTable t({"a", "b"});
    t.add({"1", "x"});
    CHECK(t.str() == "a,b\n1,x\n");
    CHECK_THROWS(t.add({"1"}));
  }

  TEST_CASE("check log tallies") {
    CheckLog log;
    log.record("c", "k", "s", 1.0, "2", true);
    CHECK(log.all_pass);
    log.skip("c", "k2", "why");
    CHECK(log.all_pass);
    log.record("c", "k3", "s", 3.0, "2", false);
    CHECK_FALSE(log.all_pass);
    CHECK(log.passed == 1);
    CHECK(log.failed == 1);
    CHECK(log.skipped == 1);
  }

  TEST_CASE("bundles never overwrite") {
    TempDir tmp;
    ReportBundle b;
    b.tables.emplace("t", CsvTable({"x"}));
    b.metadata_json = "{}\n";
    b.summary = "ok\n";
    const auto d1 = write_bundle(b, tmp.path / "run");
    const auto d2 = write_bundle(b, tmp.path / "run");
    CHECK(d1 == tmp.path / "run");
    CHECK(d2 == tmp.path / "run-2");
    CHECK(slurp(d1 / "t.csv") == "x\n");
    CHECK(slurp(d2 / "summary.txt") == "ok\n");
    CHECK(fs::exists(d1 / "metadata.json"));
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path)) ++entries;
    CHECK(entries == 2);  // no staging leftovers
  }
}

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    const auto cfg = parse_config("# campaign\nalpha = 0.5, 1\nnx=128\nladder=64x32,128x64\nconvention=paper\n", "c.cfg");
    CHECK(cfg.reals("alpha", {}) == std::vector<double>{0.5, 1.0});
    CHECK(cfg.integer("nx", 0) == 128);
    CHECK(cfg.integer("nt", 7) == 7);
    CHECK(cfg.ladder("ladder", {}).size() == 2);
    CHECK(cfg.convention(FourierConvention::Canonical) == FourierConvention::Paper);
    CHECK(cfg.seed() == 1);
  }

  TEST_CASE("config errors are line precise") {
    auto message = [](const std::string& text) {
      try {
        parse_config(text, "run.cfg");
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("nx=64\nbogus=1\n").rfind("run.cfg:2:", 0) == 0);
    CHECK(message("nx=64\n\nnx=32\n").rfind("run.cfg:3:", 0) == 0);
    CHECK(message("nx=60\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("alpha=1,x\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("alpha=2\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("just text\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("ladder=64by32\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("family=noise\n").rfind("run.cfg:1:", 0) == 0);
    CHECK(message("nx=64 # trailing comment\n").empty());
  }

  TEST_CASE("a bad config exits with 2 and writes nothing") {
    TempDir tmp;
    RunConfig cfg;
    cfg.set("command", "kernel");
    cfg.set("out", (tmp.path / "out").string());
    cfg.set("r_min", "5");
    cfg.set("r_max", "1");
    std::ostringstream log;
    CHECK(execute(cfg, log) == 2);
    CHECK_FALSE(fs::exists(tmp.path / "out"));
    CHECK(log.str().find("configuration error") != std::string::npos);
    CHECK_THROWS_AS(cfg.set("nonsense", "1"), ConfigError);
  }

  TEST_CASE("verify-l2 reports the target constant") {
    TempDir tmp;
    RunConfig cfg;
    cfg.set("command", "verify-l2");
    cfg.set("alpha", "1");
    cfg.set("out", (tmp.path / "l2").string());
    std::ostringstream log;
    CHECK(execute(cfg, log) == 0);
    const auto summary = slurp(tmp.path / "l2" / "summary.txt");
    CHECK(summary.find("0.0795775") != std::string::npos);
    CHECK(summary.find("achieved ratio") != std::string::npos);
    CHECK(summary.find("verdict: PASS") != std::string::npos);
    const auto meta = slurp(tmp.path / "l2" / "metadata.json");
    CHECK(meta.find("\"seed\"") != std::string::npos);
    CHECK(meta.find("\"wall_time_seconds\"") != std::string::npos);
    CHECK(fs::exists(tmp.path / "l2" / "checks.csv"));
    CHECK(fs::exists(tmp.path / "l2" / "l2.csv"));
  }

  TEST_CASE("reruns reproduce the CSV bytes") {
    TempDir tmp;
    RunConfig cfg;
    cfg.set("command", "scaling");
    cfg.set("alpha", "1");
    cfg.set("nx", "64");
    cfg.set("nt", "32");
    cfg.set("workers", "3");
    std::ostringstream log;
    cfg.set("out", (tmp.path / "a").string());
    const int c1 = execute(cfg, log);
    cfg.set("out", (tmp.path / "b").string());
    const int c2 = execute(cfg, log);
    CHECK(c1 == 0);
    CHECK(c2 == 0);
    for (const char* f : {"scaling.csv", "checks.csv"})
      CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  }

  TEST_CASE("every command has help text") {
    for (const auto& name : command_names()) CHECK_FALSE(command_help(name).empty());
  }
}
