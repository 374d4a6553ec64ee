#include <doctest.h>

#include "graphon_games/errors.hpp"
#include "graphon_games/function_space.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace graphon_games;

TEST_CASE("grid midpoints and validation") {
  const Grid g(4);
  CHECK(g.point(0) == doctest::Approx(0.125));
  CHECK(g.point(3) == doctest::Approx(0.875));
  CHECK_THROWS_AS(Grid(0), ConfigError);
  CHECK_THROWS_AS(GridProfile(g, Eigen::VectorXd::Zero(3)), ConfigError);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v[1] = NAN;
  CHECK_THROWS_AS(GridProfile(g, v), ConfigError);
}

TEST_CASE("midpoint quadrature integrates linear functions exactly") {
  const Grid g(100);
  const auto p = GridProfile::from_function(g, [](double x) { return 3 * x + 1; });
  CHECK(integrate(p) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(l2_norm(GridProfile::constant(g, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("embed_step and block_average are inverse on block profiles") {
  Eigen::VectorXd v(5);
  v << 1, -2, 3.5, 0, 7;
  const auto p = embed_step(v, 40);
  CHECK((block_average(p, 5) - v).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(embed_step(v, 41), ConfigError);
}

TEST_CASE("permutation-invariant distance is bounded by the identity distance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = U(rng);
      b[i] = U(rng);
    }
    const auto pa = embed_step(a, 16), pb = embed_step(b, 16);
    const double id = perm_invariant_dist(pa, pb, IdentityRelabel{});
    CHECK(id == doctest::Approx(l2_dist(pa, pb)));
    CHECK(perm_invariant_dist(pa, pb, SortValues{}) <= id + 1e-14);
    CHECK(perm_invariant_dist(pa, pb, ExhaustiveBlocks{4}) <= id + 1e-14);
  }
  // A relabelled copy has distance zero under exhaustive block search.
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 3;
  b << 3, 1, 2;
  CHECK(perm_invariant_dist(embed_step(a, 9), embed_step(b, 9), ExhaustiveBlocks{3}) < 1e-15);
  CHECK(perm_invariant_dist(embed_step(a, 9), embed_step(b, 9), SortValues{}) < 1e-15);
}

TEST_CASE("profile CSV round-trips bit-exactly") {
  const auto p = GridProfile::from_function(Grid(7), [](double x) { return std::exp(x) / 3.0; });
  std::stringstream ss;
  write_profile_csv(ss, p);
  CHECK(ss.str().rfind("x,value\n", 0) == 0);
  const auto q = read_profile_csv(ss);
  CHECK(q.size() == 7);
  CHECK((q.values() - p.values()).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("a,b\n1,2\n");
  CHECK_THROWS_AS(read_profile_csv(bad), ConfigError);
}
