#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "inswap/cli.hpp"
#include "inswap/config.hpp"
#include "inswap/manifest.hpp"
#include "inswap/model.hpp"

using namespace inswap;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("inswap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_text(const std::string& cfg_text) {
  try {
    parse_config(cfg_text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("empty config yields the documented defaults") {
  Config cfg = parse_config("{}");
  CHECK(cfg.grid.n == 12);
  CHECK(cfg.grid.lo == -1.5);
  CHECK(cfg.grid.hi == 1.5);
  CHECK(cfg.potential.type == "franz");
  CHECK(cfg.potential.alpha == 1.0);
  REQUIRE(cfg.temperatures.size() == 2);
  CHECK(cfg.temperatures[0] == 0.1);
  CHECK(cfg.temperatures[1] == 0.5);
  CHECK(cfg.dynamics == "ins");
  CHECK(cfg.horizon == 1000.0);
  CHECK(cfg.replicas == 1);
  CHECK(cfg.seed == 1);
  CHECK(cfg.jobs == 1);
  CHECK(cfg.constraint.tol == 1e-6);
  CHECK(cfg.tables.alphas.size() == 5);
  CHECK(cfg.tables.deltas.size() == 4);
  CHECK(cfg.diagnose.w1.size() == 5);
}

TEST_CASE("unknown keys are rejected with their path") {
  std::string msg = error_text(R"({"tables": {"foo": 1}})");
  CHECK(contains(msg, "tables.foo"));
  CHECK(contains(msg, "unknown key"));
}

TEST_CASE("all validation failures are reported at once") {
  std::string msg = error_text(
      R"({"horizon": -1.0, "replicas": 0, "temperatures": [0.1, -0.5]})");
  CHECK(contains(msg, "horizon"));
  CHECK(contains(msg, "replicas"));
  CHECK(contains(msg, "temperatures[1]"));
}

TEST_CASE("type and range errors carry field paths") {
  CHECK(contains(error_text(R"({"grid": 5})"), "expected an object"));
  CHECK(contains(error_text(R"({"value_function": {"delta": 1.0}})"),
                 "value_function.delta"));
  CHECK(contains(error_text(R"({"potential": {"alpha": 1.5}})"),
                 "potential.alpha"));
  CHECK(contains(error_text(R"({"dynamics": "glauber"})"), "dynamics"));
  CHECK(contains(error_text(R"({"rate": {"measure": "custom"}})"), "rate.nu"));
  CHECK(contains(
      error_text(
          R"({"grid": {"n": 3, "lo": 0.0, "hi": 1.0},
              "potential": {"type": "tabulated", "values": [0.0, 1.0]}})"),
      "potential.values"));
  CHECK(contains(error_text("not json at all"), "not valid JSON"));
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path/config.json"), ConfigError);
  std::string msg =
      error_text(R"({"rate": {"measure": "custom", "nu": [1, 1, 1]}})");
  CHECK(contains(msg, "rate.nu"));
}

TEST_CASE("potential values: family formula and tabulated echo") {
  Config cfg = parse_config(R"({"grid": {"lo": -1.5, "hi": 1.5, "n": 5}})");
  Eigen::VectorXd v = potential_values(cfg);
  Eigen::VectorXd expect = double_well_potential(cfg.grid.points(), 1.0);
  CHECK((v - expect).lpNorm<Eigen::Infinity>() == 0.0);

  Config tab = parse_config(
      R"({"grid": {"n": 3, "lo": 0.0, "hi": 1.0},
          "potential": {"type": "tabulated", "values": [0.0, 0.25, 1.0]}})");
  Eigen::VectorXd tv = potential_values(tab);
  REQUIRE(tv.size() == 3);
  CHECK(tv[1] == 0.25);
}

TEST_CASE("canonical config is order independent and hashes stably") {
  Config a = parse_config(R"({"horizon": 7.5, "grid": {"n": 4}})");
  Config b = parse_config(R"({"grid": {"n": 4}, "horizon": 7.5})");
  CHECK(canonical_json(a) == canonical_json(b));
  CHECK(canonical_json(a) != canonical_json(parse_config("{}")));
  // The worker count never changes results, so it never changes the hash.
  Config c = b;
  c.jobs = 7;
  CHECK(canonical_json(b) == canonical_json(c));
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("rate command writes a manifest and the frozen uniform rate") {
  fs::path dir = fresh_dir("rate");
  Config cfg = parse_config("{}");
  CHECK(run_command("rate", cfg, dir.string()) == 0);
  nlohmann::json r = nlohmann::json::parse(slurp(dir / "rate.json"));
  const double expect = 0.78424846024309658;
  CHECK(std::abs(r["rate"].get<double>() - expect) <= 1e-6 * expect);
  CHECK(r["states"].get<int>() == 144);

  nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["command"] == "rate");
  CHECK(m["version"] == kVersion);
  CHECK(m["grid"]["n"].get<int>() == 12);
  CHECK(m["seed"].get<std::uint64_t>() == 1);
  CHECK(m["config_hash"] == hex64(fnv1a64(canonical_json(cfg))));
  bool listed = false;
  for (const auto& o : m["outputs"]) listed = listed || o == "rate.json";
  CHECK(listed);

  Config sym = parse_config(R"({"rate": {"measure": "symmetrized"}})");
  fs::path dir2 = fresh_dir("rate_sym");
  CHECK(run_command("rate", sym, dir2.string()) == 0);
  nlohmann::json r2 = nlohmann::json::parse(slurp(dir2 / "rate.json"));
  CHECK(r2["rate"].get<double>() == 0.0);
}

TEST_CASE("value-function command emits one row per grid point") {
  fs::path dir = fresh_dir("vf");
  Config cfg = parse_config(R"({"value_function": {"n": 16}})");
  CHECK(run_command("value-function", cfg, dir.string()) == 0);
  std::string csv = slurp(dir / "value_function.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 16);
  CHECK(csv.rfind("# manifest=manifest.json config=", 0) == 0);
  nlohmann::json s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["bellman_residual"].get<double>() < 1e-9);
  CHECK(s["rate"].get<double>() > 0.0);
  CHECK(std::abs(s["achieved"].get<double>() - s["target"].get<double>()) <=
        1e-6);
  CHECK(s["kappa"].get<double>() > 0.0);
}

TEST_CASE("diagnose command distances vanish exactly at the uniform target") {
  fs::path dir = fresh_dir("diag");
  Config cfg = parse_config(
      R"({"grid": {"n": 8}, "diagnose": {"w1": [0.45, 0.5]}})");
  CHECK(run_command("diagnose", cfg, dir.string()) == 0);
  nlohmann::json s = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(s["rows"].size() == 2);
  CHECK(s["rows"][0]["rate"].get<double>() > 0.0);
  CHECK(s["rows"][0]["distance"].get<double>() > 0.0);
  CHECK(s["rows"][1]["rate"].get<double>() == 0.0);
  CHECK(s["rows"][1]["distance"].get<double>() == 0.0);
  std::string csv = slurp(dir / "diagnose.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 2);
}

TEST_CASE("simulate command is deterministic across worker counts") {
  Config cfg = parse_config(
      R"({"grid": {"n": 6}, "horizon": 40.0, "replicas": 3,
          "checkpoints": 2, "seed": 9})");
  fs::path d1 = fresh_dir("sim_jobs1");
  fs::path d2 = fresh_dir("sim_jobs2");
  CHECK(run_command("simulate", cfg, d1.string()) == 0);
  Config par = cfg;
  par.jobs = 3;
  CHECK(run_command("simulate", par, d2.string()) == 0);
  CHECK(slurp(d1 / "occupation.csv") == slurp(d2 / "occupation.csv"));
  CHECK(slurp(d1 / "curves.csv") == slurp(d2 / "curves.csv"));
  CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
  nlohmann::json s = nlohmann::json::parse(slurp(d1 / "summary.json"));
  REQUIRE(s["runs"].size() == 3);
  CHECK(s["dynamics"] == "ins");
  CHECK(s["mean_tv_eta"].get<double>() >= 0.0);
  for (const auto& run : s["runs"]) {
    CHECK(run["jumps"].get<std::int64_t>() > 0);
    CHECK(run["beta"].size() == 2);
  }
}

TEST_CASE("simulate command runs the swap-coupled dynamics") {
  Config cfg = parse_config(
      R"({"grid": {"n": 5}, "dynamics": "pt", "swap_rate": 2.0,
          "horizon": 30.0, "replicas": 1, "checkpoints": 1, "seed": 4})");
  fs::path dir = fresh_dir("sim_pt");
  CHECK(run_command("simulate", cfg, dir.string()) == 0);
  nlohmann::json s = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(s["runs"].size() == 1);
  CHECK(s["runs"][0]["rho"].size() == 2);
}

TEST_CASE("tables command emits the three tables") {
  Config cfg = parse_config(
      R"({"grid": {"n": 8},
          "tables": {"alphas": [1.0, 0.9], "deltas": [0.05]}})");
  fs::path dir = fresh_dir("tables");
  CHECK(run_command("tables", cfg, dir.string()) == 0);
  std::string t1 = slurp(dir / "table1.csv");
  std::string t2 = slurp(dir / "table2.csv");
  std::string t3 = slurp(dir / "table3.csv");
  CHECK(std::count(t1.begin(), t1.end(), '\n') == 2 + 2);
  CHECK(std::count(t2.begin(), t2.end(), '\n') == 2 + 2);
  CHECK(std::count(t3.begin(), t3.end(), '\n') == 2 + 2);
  nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["outputs"].size() == 3);
  CHECK(m["wall_seconds"].get<double>() >= 0.0);
  CHECK(m["config"]["tables"]["alphas"].size() == 2);
}

TEST_CASE("command exit codes distinguish config from solver failures") {
  Config tab = parse_config(
      R"({"grid": {"n": 3, "lo": 0.0, "hi": 1.0},
          "potential": {"type": "tabulated", "values": [0.0, 0.5, 1.0]}})");
  fs::path d2 = fresh_dir("exit2");
  CHECK(run_command("tables", tab, d2.string()) == 2);
  CHECK(run_command("bogus", tab, d2.string()) == 2);

  Config hard = parse_config(
      R"({"grid": {"n": 6}, "constraint": {"tol": 1e-14, "max_iter": 1},
          "tables": {"alphas": [1.0], "deltas": [0.05]}})");
  fs::path d3 = fresh_dir("exit3");
  CHECK(run_command("tables", hard, d3.string()) == 3);
}

}  // TEST_SUITE
