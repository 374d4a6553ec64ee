#include <doctest.h>

#include "graphon_games/convergence_lab.hpp"
#include "graphon_games/errors.hpp"

#include <cmath>
#include <sstream>

using namespace graphon_games;

TEST_CASE("snap_grid and row_seed") {
  CHECK(snap_grid(1600, 50) == 1600);
  CHECK(snap_grid(1000, 300) == 900);
  CHECK(snap_grid(1050, 300) == 1200);
  CHECK(snap_grid(10, 300) == 300);
  CHECK(row_seed(1, 50) == row_seed(1, 50));
  CHECK(row_seed(1, 50) != row_seed(1, 100));
  CHECK(row_seed(1, 50) != row_seed(2, 50));
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
  CHECK(loglog_slope({2, 4}, {3, 3}) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("weighted sampling of a constant graphon: d_S is the diagonal effect") {
  // W_ij = a off the diagonal: the finite equilibrium is 2N/(5N+1) for a = 1/2,
  // against 0.4 for the graphon game, so d_S = 0.4/(5N+1) — O(1/N), not zero.
  StudyConfig cfg;
  cfg.sampling = SampleKind::Weighted;
  cfg.Nlist = {50, 100};
  cfg.seeds = {1, 2};
  cfg.gridM = 400;
  const auto t = run_convergence_study(cfg);
  REQUIRE(t.rows.size() == 4);
  for (const auto& r : t.rows) CHECK(r.dS == doctest::Approx(0.4 / (5.0 * r.N + 1)).epsilon(1e-9));
  CHECK(t.fittedSlope == doctest::Approx(std::log(0.4 / 501 / (0.4 / 251)) / std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("study tables are deterministic and written with the documented headers") {
  StudyConfig cfg;
  cfg.Nlist = {20, 40};
  cfg.seeds = {1, 2, 3};
  cfg.gridM = 200;
  const auto a = run_convergence_study(cfg);
  const auto b = run_convergence_study(cfg);
  std::stringstream sa, sb;
  write_rate_table_csv(sa, a);
  write_rate_table_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("N,seed,dS,epsilon,opNorm,cutLower,cutUpper\n", 0) == 0);
  CHECK(a.medians.size() == 2);
  for (const auto& r : a.rows) {
    CHECK(r.cutLower <= r.cutUpper + 1e-12);
    CHECK(std::isnan(r.epsilon));
  }
  const auto meta = study_metadata(cfg, a, "convergence");
  CHECK(meta.at("study") == "convergence");
}

TEST_CASE("epsilon study decreases with N") {
  StudyConfig cfg;
  cfg.Nlist = {25, 100};
  cfg.seeds = {1, 2, 3};
  cfg.gridM = 400;
  const auto t = run_epsilon_study(cfg, BetaGrid{}, 100);
  CHECK(median_for(t, 100, true) < median_for(t, 25, true));
}

TEST_CASE("study validation") {
  StudyConfig cfg;
  cfg.Nlist = {};
  CHECK_THROWS_AS(validate_study(cfg), ConfigError);
  cfg = StudyConfig{};
  cfg.seeds = {};
  CHECK_THROWS_AS(validate_study(cfg), ConfigError);
  CHECK_THROWS_AS(parse_permutation_search("blocks:0"), ConfigError);
  CHECK(to_string(parse_permutation_search("blocks:4")) == "blocks:4");
}

TEST_CASE("stability rows on constant perturbations") {
  const auto rows = run_stability_study(builtin_cities(1.0, 0.2), Graphon::constant(1.0),
                                        {Graphon::constant(1.05), Graphon::constant(0.9)}, 64);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.ok);
    CHECK(r.opNormDiff > 0);
    CHECK(r.equilibriumDiff <= r.kappaBound * (1 + kStabilitySlack) + 1e-12);
  }
  std::stringstream ss;
  write_stability_csv(ss, rows);
  CHECK(ss.str().rfind("perturbation,opNormDiff,equilibriumDiff,kappaBound,c0,ok\n", 0) == 0);
}

TEST_CASE("theoretical constants") {
  const auto tc = theoretical_constants(builtin_beach(), 1.0, 1.0, 0.1, 1.0);
  CHECK(tc.kappa.has_value());
  CHECK(tc.kappa1 == doctest::Approx(1.0 / (1.0 - 1.1 / 3)));
  CHECK_THROWS_AS(theoretical_constants(builtin_beach(), 1.0, 3.0, 0.1, 1.0), ConditionViolation);
}
