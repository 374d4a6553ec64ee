#pragma once

#include "graphon_games/game.hpp"
#include "graphon_games/graphon.hpp"

#include <optional>
#include <string>
#include <variant>

namespace graphon_games {

struct AggregateOptions {
  double tol = 1e-13;
  int maxIter = 100000;
  /// Run even when √c_z·‖W‖ ≥ 1 (experiments only).
  bool overrideContraction = false;
  /// Precomputed ‖W‖; computed on demand when absent.
  std::optional<double> wNorm;
};

/// z = 𝐖[b(α, z)] by Banach iteration from z = 0.
GridProfile solve_aggregate(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha,
                            const AggregateOptions& opts = {});

/// Pointwise argmin of 𝒥(·, z_x).
GridProfile best_response_profile(const GameSpec& spec, const GridProfile& z);

/// Scalar best response; Newton with bisection safeguard for custom costs.
double best_response(const GameSpec& spec, double z);

struct EquilibriumReport {
  GridProfile profile;
  GridProfile aggregate;
  int iterations = 0;
  double residual = 0.0;
  Certificate certificate;
  bool converged = false;
};

struct NashOptions {
  double tol = 1e-12;
  int maxIter = 10000;
  /// Relaxation α ← (1−λ)α + λ·B(Zα); 1 is plain Picard.
  double damping = 1.0;
  bool overrideContraction = false;
  std::optional<double> wNorm;
};

/// Picard iteration on B∘Z. Throws NonConvergence when the step grows for 50
/// consecutive iterations; returns converged = false on hitting maxIter.
EquilibriumReport solve_nash(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& init,
                             const NashOptions& opts = {});
EquilibriumReport solve_nash(const GameSpec& spec, const DiscretizedOperator& op, const NashOptions& opts = {});

/// sup_x |α_x − [B Z α]_x|.
double equilibrium_residual(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha);

namespace example {
struct Beach {};
struct Cities {
  double k;
  double theta;
};
struct Cournot {
  double a;
  double b;
  double c;
};
}  // namespace example
using ClosedFormExample = std::variant<example::Beach, example::Cities, example::Cournot>;

/// Katz-centrality form of the equilibrium, evaluated with the discretized resolvent.
GridProfile closed_form_nash(const ClosedFormExample& ex, const DiscretizedOperator& op);
GridProfile closed_form_nash(const ClosedFormExample& ex, const Graphon& w, const Grid& grid);

struct CournotCheck {
  GridProfile derived;      ///< (a/(1+2b))[I − (c(1+b)/(1+2b))W]^{-1}1
  std::optional<GridProfile> alternative;  ///< (a/(1+2b))[I − c(1+b)W]^{-1}1, when that resolvent exists
  double derivedResidual;
  std::optional<double> alternativeResidual;
};

/// Both Cournot candidate formulas and their equilibrium-condition residuals.
CournotCheck cournot_closed_form_check(double a, double b, double c, const DiscretizedOperator& op);

struct MFGSolution {
  double alphaHat;
  double zHat;
  double strength;  ///< the constant row integral a
};

/// Scalar reduction for graphons of constant connection strength; empty otherwise.
std::optional<MFGSolution> mfg_reduce(const GameSpec& spec, const Graphon& w, const Grid& grid, double tol);

/// K-population system for a step graphon: returns the K block actions.
Eigen::VectorXd k_population_solve(const GameSpec& spec, const Eigen::MatrixXd& W, double tol = 1e-13,
                                   int maxIter = 100000);

/// 𝒮(α) = ∫ 𝒥(α_x, [Zα]_x) dx with the operator's quadrature.
double social_cost(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha);

struct ClosedFormPlanner {};
struct GradientDescent {
  double step = 0.5;
  double tol = 1e-10;
  int maxIter = 100000;
};
using PlannerMethod = std::variant<ClosedFormPlanner, GradientDescent>;

struct PlannerReport {
  GridProfile profile;
  double socialCost;
  std::string method;
  int iterations;
  double gradientNorm;
};

PlannerReport planner_optimum(const GameSpec& spec, const DiscretizedOperator& op,
                              const PlannerMethod& method = ClosedFormPlanner{});

struct PoAReport {
  double poa;
  double nashCost;
  double plannerCost;
  /// ⟨[I−θW]^{-2}1,1⟩ / ⟨[I−2θW]^{-1}1,1⟩, cities-type specs only.
  std::optional<double> innerProductPoa;
  EquilibriumReport nash;
  PlannerReport planner;
};

/// 𝒮(α̂)/𝒮(α^O); throws ConditionViolation when the planner problem is not convex.
PoAReport price_of_anarchy(const GameSpec& spec, const DiscretizedOperator& op);

namespace poa_family {
struct ConstantStrength {
  double a;
};
struct PowerLaw {
  double gamma;
};
struct NormalizedPowerLaw {
  double gamma;
  std::optional<double> g;  ///< defaults to (1−γ)²
};
struct Threshold {};
}  // namespace poa_family
using PoAFamily = std::variant<poa_family::ConstantStrength, poa_family::PowerLaw, poa_family::NormalizedPowerLaw,
                               poa_family::Threshold>;

/// Closed-form cities-game PoA; ConditionViolation outside the feasible region.
double poa_closed_form(const PoAFamily& family, double theta);
bool poa_feasible(const PoAFamily& family, double theta);

/// κ of the stability estimate ‖α − α′‖ ≤ κ‖𝐖 − 𝐖′‖.
double stability_bound(const GameSpec& spec, double wNorm, double wNormPrime, double c0);

/// Analytic profiles of the worked examples, as functions of x.
namespace analytic {
double beach_constant(double a);
double beach_power_law(double gamma, double x);
double beach_threshold(double x);
double cities_threshold_nash(double k, double theta, double x);
double cities_threshold_planner(double k, double theta, double x);
/// Eigen-expansion of [I − W/3]^{-1}1 for the min-max graphon, resummed so the
/// truncated series converges uniformly.
double minmax_resolvent(double x, int terms = 200);
/// The same expansion summed literally term by term (Gibbs oscillation near 0 and 1).
double minmax_resolvent_literal(double x, int terms = 200);
}  // namespace analytic

nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const PlannerReport& r);

}  // namespace graphon_games
