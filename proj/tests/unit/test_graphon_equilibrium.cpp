#include <doctest.h>

#include "graphon_games/errors.hpp"
#include "graphon_games/graphon_equilibrium.hpp"

#include <cmath>

using namespace graphon_games;

TEST_CASE("beach on constant graphons is 1/(3-a)") {
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const auto op = discretize(Graphon::constant(a), Grid(64));
    const auto r = solve_nash(builtin_beach(), op);
    CHECK(r.converged);
    CHECK((r.profile.values().array() - 1 / (3 - a)).abs().maxCoeff() < 1e-10);
    CHECK(equilibrium_residual(builtin_beach(), op, r.profile) < 1e-10);
  }
}

TEST_CASE("mean-field reduction matches the graphon solve") {
  const auto grid = Grid(64);
  const auto m = mfg_reduce(builtin_beach(), Graphon::constant(1.5), grid, 1e-13);
  REQUIRE(m.has_value());
  CHECK(m->alphaHat == doctest::Approx(1 / 1.5));
  CHECK(m->strength == doctest::Approx(1.5));
  CHECK_FALSE(mfg_reduce(builtin_beach(), Graphon::min_max(), grid, 1e-13).has_value());
}

TEST_CASE("K-population solve equals the step graphon equilibrium") {
  Eigen::MatrixXd W(2, 2);
  W << 0.8, 0.3, 0.3, 0.5;
  const auto blocks = k_population_solve(builtin_beach(), W);
  const auto op = discretize(step_graphon_from_matrix(W), Grid(64));
  const auto r = solve_nash(builtin_beach(), op);
  CHECK((block_average(r.profile, 2) - blocks).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("closed forms satisfy the equilibrium condition") {
  const auto op = discretize(Graphon::min_max(), Grid(128));
  CHECK(equilibrium_residual(builtin_beach(), op, closed_form_nash(example::Beach{}, op)) < 1e-11);
  CHECK(equilibrium_residual(builtin_cities(1.0, 0.3), op, closed_form_nash(example::Cities{1.0, 0.3}, op)) < 1e-11);
  CHECK(equilibrium_residual(builtin_cournot(1, 1, 0.2), op, closed_form_nash(example::Cournot{1, 1, 0.2}, op)) < 1e-11);
}

TEST_CASE("cournot: the alternative formula is not an equilibrium") {
  const auto op = discretize(Graphon::constant(0.5), Grid(64));
  const auto chk = cournot_closed_form_check(1, 1, 0.2, op);
  CHECK(chk.derivedResidual < 1e-12);
  REQUIRE(chk.alternativeResidual.has_value());
  CHECK(*chk.alternativeResidual > 1e-3);
}

TEST_CASE("threshold analytic profiles") {
  const auto op = discretize(Graphon::simple_threshold(), Grid(1024));
  const auto r = solve_nash(builtin_beach(), op);
  for (int i = 0; i < 1024; i += 97) CHECK(r.profile[i] == doctest::Approx(analytic::beach_threshold(op.grid().point(i))).epsilon(1e-5));
  const auto nash = closed_form_nash(example::Cities{1.0, 0.4}, op);
  for (int i = 0; i < 1024; i += 97) {
    CHECK(nash[i] == doctest::Approx(analytic::cities_threshold_nash(1.0, 0.4, op.grid().point(i))).epsilon(1e-5));
  }
}

TEST_CASE("planner methods agree and PoA is at most one") {
  const auto op = discretize(Graphon::power_law(0.1), Grid(128));
  const auto spec = builtin_cities(1.0, 0.25);
  const auto cf = planner_optimum(spec, op, ClosedFormPlanner{});
  const auto gd = planner_optimum(spec, op, GradientDescent{});
  CHECK(sup_dist(cf.profile, gd.profile) < 1e-6);
  CHECK(cf.socialCost <= social_cost(spec, op, solve_nash(spec, op).profile) + 1e-12);
  const auto poa = price_of_anarchy(spec, op);
  CHECK(poa.poa <= 1.0 + 1e-12);
  REQUIRE(poa.innerProductPoa.has_value());
  CHECK(*poa.innerProductPoa == doctest::Approx(poa.poa).epsilon(1e-9));
}

TEST_CASE("PoA closed forms and feasibility") {
  CHECK(poa_closed_form(poa_family::ConstantStrength{1.0}, 0.25) == doctest::Approx(0.5 / 0.5625));
  CHECK(poa_feasible(poa_family::PowerLaw{0.2}, 0.25));
  CHECK_FALSE(poa_feasible(poa_family::PowerLaw{0.2}, 0.35));
  CHECK_THROWS_AS(poa_closed_form(poa_family::ConstantStrength{1.0}, 0.6), ConditionViolation);
  CHECK_FALSE(poa_feasible(poa_family::Threshold{}, 0.8));
  const auto op = discretize(Graphon::constant(2.0), Grid(32));
  CHECK_THROWS_AS(price_of_anarchy(builtin_cities(1.0, 0.3), op), ConditionViolation);
}

TEST_CASE("solve_nash fails loudly outside the contraction regime") {
  const auto op = discretize(Graphon::constant(4.0), Grid(16));
  CHECK_THROWS_AS(solve_nash(builtin_beach(), op), NonConvergence);
  const auto op2 = discretize(Graphon::constant(6.0), Grid(16));
  CHECK_THROWS_AS(solve_nash(builtin_cournot(1, 1, 0.2), op2), ConditionViolation);
}

TEST_CASE("damping reaches the same equilibrium") {
  const auto op = discretize(Graphon::min_max(), Grid(64));
  NashOptions o;
  o.damping = 0.5;
  const auto a = solve_nash(builtin_beach(), op, o);
  const auto b = solve_nash(builtin_beach(), op);
  CHECK(sup_dist(a.profile, b.profile) < 1e-11);
}

TEST_CASE("custom cost uses the Newton path") {
  GameSpec s;
  CustomCost c;
  c.J = [](double a, double z) { return a * a + 0.25 * a * a * a * a - a * z; };
  c.dJ = [](double a, double z) { return 2 * a + a * a * a - z; };
  c.ell_c = 2;
  c.ell_J = 1;
  c.ell_J_tilde = 10;
  s.cost = c;
  s.bundle = ConstantBundle{1.0, 0.0, 2.0, 1.0, 10.0, std::nullopt};
  const double br = best_response(s, 3.0);
  CHECK(2 * br + br * br * br == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("min-max resolvent series") {
  const auto op = discretize(Graphon::min_max(), Grid(1024));
  const auto r = resolvent_apply(op, 1.0 / 3, GridProfile::constant(op.grid(), 1.0));
  for (int i = 0; i < 1024; i += 101) CHECK(r[i] == doctest::Approx(analytic::minmax_resolvent(op.grid().point(i))).epsilon(1e-6));
}

TEST_CASE("stability bound") {
  // Identity drift: κ = c0·ℓ_J/(ℓ_c − ℓ_J·‖W‖).
  CHECK(stability_bound(builtin_beach(), 1.0, 1.0, 0.5) == doctest::Approx(0.5 * 2 / (6 - 2)));
  CHECK_THROWS_AS(stability_bound(builtin_beach(), 4.0, 1.0, 0.5), ConditionViolation);
}
