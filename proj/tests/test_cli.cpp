#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rdtlab/app.hpp"

using namespace rdt::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path p = fs::temp_directory_path() / ("rdtlab_test_" + tag + "_" + std::to_string(rng()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig make(const std::string& command, const fs::path& out, Tier tier = Tier::kSmoke) {
  ExperimentConfig c;
  c.command = command;
  c.seed = 1;
  c.tier = tier;
  c.out = out;
  return c;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "rdtlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse("command = flow\nseed = 7\ntier = smoke\nout = runs/a\n[flow]\nT = 2\n");
  CHECK(c.command == "flow");
  CHECK(*c.seed == 7);
  CHECK(c.tier == Tier::kSmoke);
  CHECK(c.out == fs::path("runs/a"));
  const auto kv = c.effective_params();
  CHECK(kv.number("T", 0) == 2);
  CHECK(kv.integer("nodes", 0) == 256);

  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\n[fluw]\nT = 1\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\ntier = huge\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("seed = -3\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\n[flow\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\n").effective_params(), ConfigError);  // no seed
  CHECK_THROWS_AS(ExperimentConfig::parse("command = flow\nseed = 1\n[flow]\nTT = 1\n").effective_params(), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("command = fly\nseed = 1\n").effective_params(), ConfigError);
}

TEST_CASE("tiers pin the resolution") {
  auto c = ExperimentConfig::parse("command = flow\nseed = 1\n");
  CHECK(c.effective_params().integer("nodes", 0) == 160);
  CHECK(c.effective_params().number("T", 0) == 100);
  c.tier = Tier::kDeep;
  CHECK(c.effective_params().integer("snapshots_per_decade", 0) == 32);
  CHECK(parse_tier(to_string(Tier::kDesk)) == Tier::kDesk);
  for (const auto& name : command_names())
    for (const auto& p : command_params(name)) CHECK_MESSAGE(!p.help.empty(), (name + "." + p.key));
}

TEST_CASE("input hash follows the effective configuration") {
  auto a = ExperimentConfig::parse("command = kernel-verify\nseed = 1\n");
  auto b = a;
  CHECK(a.input_hash() == b.input_hash());
  b.out = "elsewhere";
  CHECK(a.input_hash() == b.input_hash());
  b.params.set("kernel-verify.samples", "2000");  // equal to the desk default
  CHECK(a.input_hash() == b.input_hash());
  b.params.set("kernel-verify.samples", "2001");
  CHECK(a.input_hash() != b.input_hash());
  b = a;
  b.seed = 2;
  CHECK(a.input_hash() != b.input_hash());
  CHECK(ExperimentConfig::parse(a.echo()).input_hash() == a.input_hash());
}

TEST_CASE("smoke flow run") {
  const fs::path d1 = scratch("flow1"), d2 = scratch("flow2");
  const auto t0 = std::chrono::steady_clock::now();
  const auto m1 = dispatch(make("flow", d1));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 10);
  CHECK(m1.passed());
  REQUIRE(fs::exists(d1 / "manifest.json"));
  const auto stored = RunManifest::from_json(nlohmann::json::parse(slurp(d1 / "manifest.json")));
  CHECK(stored.digest() == m1.digest());
  CHECK(stored.input_hash == make("flow", d1).input_hash());

  // Every file of the run directory is listed once.
  std::set<std::string> listed{"manifest.json"};
  for (const auto& a : m1.artifacts) CHECK(listed.insert(a.path).second);
  for (const auto& f : fs::directory_iterator(d1)) CHECK(listed.count(f.path().filename().string()));
  CHECK(listed.count("trajectory.csv"));

  const auto m2 = dispatch(make("flow", d2));
  CHECK(m2.digest() == m1.digest());
  CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
  CHECK(slurp(d1 / "diagnostics.csv") == slurp(d2 / "diagnostics.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("invalid parameters are rejected before anything is written") {
  const fs::path d = scratch("bad");
  auto c = make("flow", d);
  c.params.set("flow.eps", "-1");
  CHECK_THROWS_AS(dispatch(c), ConfigError);
  c = make("barrier-verify", d);
  c.params.set("barrier-verify.k", "9");
  CHECK_THROWS_AS(dispatch(c), ConfigError);
  c = make("ortho-sandbox", d);
  c.params.set("ortho-sandbox.radii", "0.1,0.5");
  CHECK_THROWS_AS(dispatch(c), ConfigError);
  c.params.set("ortho-sandbox.radii", "0.1,x");
  CHECK_THROWS_AS(dispatch(c), ConfigError);
  c = make("report", d);
  c.params.set("report.expect", "flow,nothing");
  CHECK_THROWS_AS(dispatch(c), ConfigError);
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("report") {
  const fs::path root = scratch("report");
  auto rep = make("report", root / "summary");
  rep.params.set("report.root", root.string());

  SUBCASE("empty set") {
    fs::create_directories(root);
    const auto m = dispatch(rep);
    CHECK(m.passed());
    const auto j = nlohmann::json::parse(slurp(root / "summary" / "report.json"));
    CHECK(j["checks"].empty());
    CHECK(j["runs"].empty());
  }

  SUBCASE("fresh, stale and missing runs") {
    dispatch(make("ortho-sandbox", root / "ortho"));
    rep.params.set("report.expect", "ortho-sandbox,tensor-verify");
    auto m = dispatch(rep);
    auto j = nlohmann::json::parse(slurp(root / "summary" / "report.json"));
    CHECK(j["checks"].size() == 5);
    CHECK(j["missing"] == nlohmann::json::array({"tensor-verify"}));
    for (const auto& c : m.checks) {
      if (c.id == "report.complete") CHECK(c.status == "fail");
      if (c.id == "report.fresh") CHECK(c.status == "pass");
      if (c.id == "report.latest_checks_pass") CHECK(c.status == "pass");
    }

    std::ofstream(root / "ortho" / "ortho_maps.csv", std::ios::app) << "1,2,3\n";
    std::ofstream(root / "ortho" / "stray.txt") << "x\n";
    rep.params.set("report.expect", "ortho-sandbox");
    m = dispatch(rep);
    CHECK_FALSE(m.passed());
    j = nlohmann::json::parse(slurp(root / "summary" / "report.json"));
    REQUIRE(j["runs"].size() == 1);
    CHECK(j["runs"][0]["stale"].size() == 1);
    CHECK(j["runs"][0]["orphans"] == nlohmann::json::array({"stray.txt"}));
    CHECK(j["checks"][0]["stale"] == true);
  }

  SUBCASE("changed configuration marks a run stale") {
    dispatch(make("ortho-sandbox", root / "ortho"));
    auto j = nlohmann::json::parse(slurp(root / "ortho" / "manifest.json"));
    j["input_hash"] = "0000";
    std::ofstream(root / "ortho" / "manifest.json") << j.dump();
    const auto m = dispatch(rep);
    CHECK_FALSE(m.passed());
  }
  fs::remove_all(root);
}

TEST_CASE("exit codes") {
  const fs::path d = scratch("cli");
  std::string err;
  CHECK(cli({"ortho-sandbox", "--tier", "smoke", "--seed", "4", "--out", (d / "ok").string()}) == 0);
  CHECK(cli({"kernel-verify", "--tier", "smoke", "--seed", "4", "--set", "samples=50", "--set", "gradient_C=0.1", "--out",
             (d / "fail").string()}) == 1);
  CHECK(cli({"flow", "--seed", "1", "--set", "bogus=1", "--out", (d / "x").string()}, &err) == 2);
  CHECK(nlohmann::json::parse(err)["error"] == "config");
  CHECK(cli({"flow", "--out", (d / "x").string()}, &err) == 2);  // seed is mandatory
  CHECK(cli({"flow", "--seed", "1"}, &err) == 2);                 // output directory is mandatory
  CHECK(cli({"teleport"}, &err) == 2);
  CHECK(cli({"flow", "--tier", "huge", "--seed", "1", "--out", (d / "x").string()}, &err) == 2);

  fs::create_directories(d);
  std::ofstream(d / "bad.ini") << "command = flow\n[flow\n";
  CHECK(cli({"--config", (d / "bad.ini").string()}, &err) == 2);
  CHECK(nlohmann::json::parse(err)["message"].get<std::string>().find("malformed") != std::string::npos);
  std::ofstream(d / "good.ini") << "command = ortho-sandbox\nseed = 2\ntier = smoke\nout = " << (d / "cfg").string()
                                << "\n[ortho-sandbox]\npsd_systems = 3\n";
  CHECK(cli({"--config", (d / "good.ini").string()}) == 0);
  CHECK(cli({"flow", "--config", (d / "good.ini").string()}, &err) == 2);
  CHECK_FALSE(fs::exists(d / "x"));
  fs::remove_all(d);
}
