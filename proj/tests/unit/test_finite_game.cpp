#include <doctest.h>

#include "graphon_games/errors.hpp"
#include "graphon_games/finite_game.hpp"

#include <cmath>
#include <sstream>

using namespace graphon_games;

namespace {
FiniteGame er_game(int N, std::uint64_t seed, GameSpec spec = builtin_beach()) {
  return finite_game_from_sample(sample_bernoulli(Graphon::constant(0.5), N, seed), std::move(spec));
}
}  // namespace

TEST_CASE("closed form satisfies the first-order conditions") {
  const auto g = er_game(50, 1);
  const auto r = solve_nash_finite(g, FiniteClosedForm{});
  const Eigen::VectorXd zbar = g.W * r.alpha / g.N;
  CHECK((6 * r.alpha.array() - 2 - 2 * zbar.array()).abs().maxCoeff() < 1e-12);
  const auto br = solve_nash_finite(g, BestResponseIteration{});
  CHECK((br.alpha - r.alpha).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("scaled norms") {
  const auto g = make_finite_game(Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4), builtin_beach());
  CHECK(frobenius_scaled(g) == doctest::Approx(std::sqrt(12.0) / 4));
  CHECK(scaled_operator_norm(g) == doctest::Approx(0.75));
}

TEST_CASE("analytic cost agrees with Monte Carlo") {
  const auto g = er_game(20, 4, builtin_beach(NoiseSpec::gaussian(0.7)));
  Eigen::VectorXd alpha = Eigen::VectorXd::LinSpaced(20, -0.5, 0.8);
  const auto noise = draw_noise(g.spec.noise, 20000, g.N, 17);
  for (int i : {0, 7, 19}) {
    const auto a = expected_cost(g, i, alpha, nullptr, CostMode::Analytic);
    const auto m = expected_cost(g, i, alpha, &noise, CostMode::MonteCarlo);
    CHECK(a.analytic);
    CHECK_FALSE(m.analytic);
    CHECK(std::abs(a.value - m.value) < 5 * m.stdError + 1e-12);
  }
}

TEST_CASE("Monte Carlo needs noise draws") {
  const auto g = er_game(10, 2);
  CHECK_THROWS_AS(expected_cost(g, 0, Eigen::VectorXd::Zero(10), nullptr, CostMode::MonteCarlo), ConfigError);
}

TEST_CASE("noise draws are reproducible") {
  const auto a = draw_noise(NoiseSpec::uniform(1.0), 5, 8, 42);
  const auto b = draw_noise(NoiseSpec::uniform(1.0), 5, 8, 42);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(draw_noise(NoiseSpec::point_mass(), 3, 4, 1).samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("epsilon certificate: zero at equilibrium, positive away from it") {
  const auto g = er_game(30, 6);
  const auto r = solve_nash_finite(g, FiniteClosedForm{});
  const auto e0 = epsilon_nash_certify(g, r.alpha, BetaGrid{}, nullptr);
  CHECK(e0.analytic);
  CHECK(e0.epsilon < 1e-12);
  Eigen::VectorXd off = r.alpha;
  off[3] += 0.1;
  const auto e1 = epsilon_nash_certify(g, off, BetaGrid{}, nullptr);
  // Player 3 can gain q2·0.1² = 0.03 by returning to its best response.
  CHECK(e1.epsilon == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(e1.worstPlayer == 3);
}

TEST_CASE("affine drift uses Monte Carlo best responses") {
  const auto g = er_game(12, 3, builtin_cournot(1, 1, 0.2, NoiseSpec::gaussian(0.3)));
  CHECK_FALSE(analytic_cost_available(g));
  const auto noise = draw_noise(g.spec.noise, 400, g.N, 5);
  const auto br = solve_nash_finite(g, BestResponseIteration{1e-9, 500, 1.0, false}, &noise);
  const auto e = epsilon_nash_certify(g, br.alpha, BetaGrid{}, &noise);
  CHECK(e.epsilon < 1e-6);
}

TEST_CASE("alpha CSV round trip") {
  Eigen::VectorXd a(3);
  a << 0.1, -2.0 / 3, 1e-300;
  std::stringstream ss;
  write_alpha_csv(ss, a);
  CHECK(read_alpha_csv(ss) == a);
}
