#include <doctest.h>

#include "graphon_games/errors.hpp"
#include "graphon_games/graphon.hpp"

#include <cmath>
#include <sstream>

using namespace graphon_games;

TEST_CASE("parse_graphon round-trips through describe") {
  for (const char* text : {"constant:0.5", "powerlaw:0.2", "normpowerlaw:0.3", "minmax", "threshold",
                           "wattsstrogatz:p=0.2,rewire=0.1", "step:1,0.5;0.5,0"}) {
    const Graphon w = parse_graphon(text);
    const Graphon again = parse_graphon(w.describe());
    CHECK(again.eval(0.3, 0.7) == doctest::Approx(w.eval(0.3, 0.7)));
  }
  CHECK_THROWS_AS(parse_graphon("powerlaw:0.4"), ConfigError);
  CHECK_THROWS_AS(parse_graphon("nosuch"), ConfigError);
  CHECK_THROWS_AS(parse_graphon("step:1,2;3,4"), ConfigError);
}

TEST_CASE("graphon values") {
  CHECK(Graphon::min_max().eval(0.2, 0.6) == doctest::Approx(0.2 * 0.4));
  CHECK(Graphon::simple_threshold().eval(0.3, 0.6) == 1.0);
  CHECK(Graphon::simple_threshold().eval(0.5, 0.6) == 0.0);
  CHECK(Graphon::power_law(0.2).eval(0.5, 0.5) == doctest::Approx(std::pow(0.25, -0.2)));
  CHECK(Graphon::normalized_power_law(0.2).eval(1, 1) == doctest::Approx(0.64));
}

TEST_CASE("operator norm of a constant graphon is a") {
  const auto op = discretize(Graphon::constant(0.7), Grid(64));
  CHECK(operator_norm(op).value == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(hs_norm(op) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("power-law quadrature weights integrate the singular moments") {
  const double g = 0.25;
  const auto op = discretize(Graphon::power_law(g), Grid(256));
  // Row integral ∫ (xy)^-γ dy = x^-γ/(1-γ).
  const auto rows = op.row_integrals();
  for (int i : {0, 10, 255}) {
    const double x = op.grid().point(i);
    CHECK(rows[i] == doctest::Approx(std::pow(x, -g) / (1 - g)).epsilon(1e-10));
  }
  // Rank one: ‖W‖ = ∫ y^-2γ dy = 1/(1-2γ).
  CHECK(operator_norm(op).value == doctest::Approx(1.0 / (1 - 2 * g)).epsilon(1e-10));
}

TEST_CASE("min-max spectrum is 1/(pi k)^2") {
  const auto op = discretize(Graphon::min_max(), Grid(512));
  const auto ep = eigen_decompose(op, 4);
  for (int k = 1; k <= 4; ++k) CHECK(ep.values[k - 1] == doctest::Approx(1.0 / (M_PI * M_PI * k * k)).epsilon(1e-4));
  // Orthonormal in the quadrature inner product.
  CHECK(integrate(GridProfile(op.grid(), ep.profiles[0].values().cwiseProduct(ep.profiles[1].values()))) ==
        doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("resolvent methods agree and Neumann checks convergence") {
  const auto op = discretize(Graphon::min_max(), Grid(128));
  const auto one = GridProfile::constant(op.grid(), 1.0);
  const auto a = resolvent_apply(op, 2.0, one, NeumannSeries{});
  const auto b = resolvent_apply(op, 2.0, one, DirectSolve{});
  CHECK(sup_dist(a, b) < 1e-12);
  const auto big = discretize(Graphon::constant(1.0), Grid(16));
  CHECK_THROWS_AS(resolvent_apply(big, 1.5, GridProfile::constant(big.grid(), 1.0), NeumannSeries{}), ConditionViolation);
  // θ = 1/a makes I − θW singular.
  CHECK_THROWS_AS(resolvent_apply(big, 1.0, GridProfile::constant(big.grid(), 1.0), DirectSolve{}), ConditionViolation);
}

TEST_CASE("operator norm difference of constants") {
  const auto a = discretize(Graphon::constant(1.0), Grid(32));
  const auto b = discretize(Graphon::constant(1.1), Grid(32));
  CHECK(operator_norm_difference(a, b).value == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("sampling is deterministic, symmetric and zero-diagonal") {
  const auto w = Graphon::min_max();
  const auto g1 = sample_bernoulli(w, 40, 9);
  const auto g2 = sample_bernoulli(w, 40, 9);
  CHECK(g1.W == g2.W);
  CHECK((g1.W - g1.W.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g1.W.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(((g1.W.array() == 0) || (g1.W.array() == 1)).all());
  CHECK(std::is_sorted(g1.latent.data(), g1.latent.data() + g1.latent.size()));
  CHECK_THROWS_AS(sample_bernoulli(Graphon::constant(2.0), 10, 1), ConfigError);
  const auto gw = sample_weighted(w, 10, 4);
  CHECK(gw.W(0, 1) == doctest::Approx(w.eval(gw.latent[0], gw.latent[1])));
}

TEST_CASE("sampled graph CSV round trip") {
  const auto g = sample_weighted(Graphon::power_law(0.1), 12, 2);
  std::stringstream ss;
  write_sampled_graph_csv(ss, g);
  const auto h = read_sampled_graph_csv(ss);
  CHECK(h.N == 12);
  CHECK(h.kind == SampleKind::Weighted);
  CHECK((h.W - g.W).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.latent - g.latent).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cut norm bounds bracket") {
  const auto b = cut_norm_bounds(Graphon::constant(0.5), Graphon::constant(0.3), Grid(32), 8);
  CHECK(b.lower == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(b.upper == doctest::Approx(0.2).epsilon(1e-10));
  const auto c = cut_norm_bounds(Graphon::min_max(), Graphon::simple_threshold(), Grid(64), 8);
  CHECK(c.lower <= c.upper + 1e-12);
}
