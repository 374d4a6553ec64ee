#include <doctest.h>

#include "graphon_games/cli.hpp"
#include "graphon_games/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace graphon_games;
namespace fs = std::filesystem;

namespace {
int run_cli(const std::string& args) {
  const std::string cmd = std::string(GRAPHON_GAMES_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graphon_games_unit_" + name);
  fs::remove_all(p);
  return p;
}
std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("config JSON round trip") {
  cli::RunConfig c;
  c.command = "converge";
  c.Nlist = {10, 20};
  c.seeds = {3};
  c.perturbations = {"constant:1.1"};
  c.tol = 1e-9;
  const auto j = cli::to_json(c);
  CHECK(cli::to_json(cli::config_from_json(j)) == j);
  CHECK_THROWS_AS(cli::config_from_json(nlohmann::json{{"gridM", "many"}}), ConfigError);
}

TEST_CASE("run writes outputs and manifest") {
  cli::RunConfig c;
  c.command = "solve";
  c.graphon = "minmax";
  c.gridM = 64;
  c.format = "dat";
  c.outDir = scratch("run").string();
  std::ostringstream out;
  cli::run(c, out);
  for (const char* f : {"profile.csv", "aggregate.csv", "profile.dat", "manifest.json"}) CHECK(fs::exists(fs::path(c.outDir) / f));
  const auto m = nlohmann::json::parse(slurp(fs::path(c.outDir) / "manifest.json"));
  CHECK(m.at("config").at("graphon") == "minmax");
  CHECK(m.at("results").at("converged") == true);
  CHECK(out.str().find("unique equilibrium certified") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run_cli("solve --graphon minmax --gridM 32 --out " + dir.string()) == 0);
  CHECK(run_cli("solve --graphon nosuch --out " + dir.string()) == 2);
  CHECK(run_cli("solve --no-such-flag") == 2);
  CHECK(run_cli("poa --game cities:k=1,theta=0.3 --graphon constant:2 --gridM 16 --out " + dir.string()) == 3);
  CHECK(run_cli("solve --graphon constant:4 --gridM 16 --out " + dir.string()) == 4);
  CHECK(run_cli("--config " + (dir / "missing.json").string()) == 2);
}

TEST_CASE("manifest re-run is byte identical") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run_cli("converge --Nlist 10,20 --seeds 1,2 --gridM 100 --format dat --out " + a.string()) == 0);
  REQUIRE(run_cli("--config " + (a / "manifest.json").string() + " --out " + b.string()) == 0);
  for (const char* f : {"rates.csv", "metadata.jsonl", "rates.dat"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("heatmap marks infeasible cells") {
  const auto dir = scratch("heat");
  REQUIRE(run_cli("poa --heatmap normpowerlaw --theta-range 0.1,0.9,4 --gamma-range 0.05,0.45,3 --out " + dir.string()) == 0);
  const auto text = slurp(dir / "poa_heatmap.dat");
  CHECK(text.find("NaN") != std::string::npos);
}

TEST_CASE("game spec files") {
  const auto dir = scratch("spec");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "game.json");
    os << to_json(builtin_cities(1.0, 0.25)).dump();
  }
  cli::RunConfig c;
  c.command = "poa";
  c.game = (dir / "game.json").string();
  c.graphon = "constant:1";
  c.gridM = 32;
  c.outDir = (dir / "out").string();
  std::ostringstream out;
  cli::run(c, out);
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m.at("results").at("poa").get<double>() == doctest::Approx(0.5 / 0.5625).epsilon(1e-9));
  c.game = (dir / "absent.json").string();
  CHECK_THROWS_AS(cli::run(c, out), ConfigError);
}
