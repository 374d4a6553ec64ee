#include "graphon_games/graphon_equilibrium.hpp"

#include "graphon_games/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphon_games {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double norm_or_compute(const std::optional<double>& given, const DiscretizedOperator& op) {
  return given ? *given : operator_norm(op).value;
}

Eigen::VectorXd drift_vector(const GameSpec& spec, const Eigen::VectorXd& alpha, const Eigen::VectorXd& z) {
  Eigen::VectorXd b(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) b[i] = drift_value(spec, alpha[i], z[i]);
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Z and B

GridProfile solve_aggregate(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha,
                            const AggregateOptions& opts) {
  if (!(alpha.grid() == op.grid())) throw ConfigError("grid mismatch between profile and operator");
  if (std::holds_alternative<IdentityDrift>(spec.drift)) return op.apply(alpha);

  const double sz = std::sqrt(spec.bundle.c_z);
  if (!opts.overrideContraction && sz > 0.0) {
    const double w = norm_or_compute(opts.wNorm, op);
    if (!(sz * w < 1.0)) {
      throw ConditionViolation("aggregate map is not a contraction: √c_z·‖W‖ = " + format_double(sz * w) + " ≥ 1");
    }
  }
  const Eigen::VectorXd& a = alpha.values();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.size());
  double diff = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= opts.maxIter; ++k) {
    Eigen::VectorXd next = op.apply(drift_vector(spec, a, z));
    diff = sup_norm(next - z);
    z = std::move(next);
    if (!z.allFinite()) throw NonConvergence("aggregate iteration produced non-finite values", k, diff);
    if (diff <= opts.tol * std::max(1.0, sup_norm(z))) return GridProfile(op.grid(), std::move(z));
  }
  throw NonConvergence("aggregate iteration hit the iteration cap", opts.maxIter, diff);
}

double best_response(const GameSpec& spec, double z) {
  if (auto a = analytic_best_response(spec, z)) return *a;

  const auto grad = [&](double a) { return cost_gradient(spec, a, z); };
  double lo = -1.0;
  double hi = 1.0;
  if (spec.actions) {
    lo = spec.actions->lo;
    hi = spec.actions->hi;
    if (grad(lo) >= 0.0) return lo;
    if (grad(hi) <= 0.0) return hi;
  } else {
    // ∂_α𝒥 is increasing (strong convexity), so doubling finds a bracket.
    int expansions = 0;
    while (grad(lo) > 0.0) {
      hi = lo;
      lo *= 2.0;
      if (++expansions > 200) throw ConditionViolation("best response bracket search failed at z = " + format_double(z));
    }
    while (grad(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > 200) throw ConditionViolation("best response bracket search failed at z = " + format_double(z));
    }
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    const double g = grad(a);
    if (std::abs(g) <= 1e-12) return a;
    if (g > 0.0) {
      hi = a;
    } else {
      lo = a;
    }
    const double h = 1e-6 * (1.0 + std::abs(a));
    const double curvature = (grad(a + h) - grad(a - h)) / (2.0 * h);
    double next = curvature > 0.0 ? a - g / curvature : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * (1.0 + std::abs(a))) return next;
    a = next;
  }
  return a;
}

GridProfile best_response_profile(const GameSpec& spec, const GridProfile& z) {
  Eigen::VectorXd out(z.size());
  for (int i = 0; i < z.size(); ++i) {
    try {
      out[i] = best_response(spec, z[i]);
    } catch (const ConditionViolation& e) {
      throw ConditionViolation(std::string(e.what()) + " (x = " + format_double(z.grid().point(i)) + ")");
    }
  }
  return GridProfile(z.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// Nash

EquilibriumReport solve_nash(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& init,
                             const NashOptions& opts) {
  if (!(init.grid() == op.grid())) throw ConfigError("grid mismatch between initial profile and operator");
  if (!(opts.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  const double wNorm = norm_or_compute(opts.wNorm, op);
  const Certificate cert = certify(spec, wNorm);
  if (!cert.contractionOk && !opts.overrideContraction) {
    throw ConditionViolation("aggregate map is not a contraction: √c_z·‖W‖ = " +
                             format_double(1.0 - cert.contractionMargin) + " ≥ 1");
  }
  AggregateOptions agg;
  agg.tol = opts.tol / 10.0;
  agg.wNorm = wNorm;
  agg.overrideContraction = opts.overrideContraction;

  GridProfile alpha = init;
  double residual = std::numeric_limits<double>::infinity();
  double previous = residual;
  int growth = 0;
  int iter = 0;
  bool converged = false;
  while (iter < opts.maxIter) {
    ++iter;
    const GridProfile z = solve_aggregate(spec, op, alpha, agg);
    GridProfile next = best_response_profile(spec, z);
    if (opts.damping < 1.0) {
      next = GridProfile(op.grid(), (1.0 - opts.damping) * alpha.values() + opts.damping * next.values());
    }
    residual = l2_dist(next, alpha);
    alpha = std::move(next);
    if (residual <= opts.tol) {
      converged = true;
      break;
    }
    growth = residual > previous ? growth + 1 : 0;
    if (growth >= 50 || !std::isfinite(residual)) {
      throw NonConvergence("best-response iteration diverges (uniqueness value " +
                               format_double(cert.uniquenessValue) + ")",
                           iter, residual);
    }
    previous = residual;
  }
  GridProfile aggregate = solve_aggregate(spec, op, alpha, agg);
  return EquilibriumReport{std::move(alpha), std::move(aggregate), iter, residual, cert, converged};
}

EquilibriumReport solve_nash(const GameSpec& spec, const DiscretizedOperator& op, const NashOptions& opts) {
  return solve_nash(spec, op, GridProfile::constant(op.grid(), 0.0), opts);
}

double equilibrium_residual(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha) {
  AggregateOptions agg;
  agg.tol = 1e-15;
  agg.overrideContraction = true;
  const GridProfile br = best_response_profile(spec, solve_aggregate(spec, op, alpha, agg));
  return sup_dist(alpha, br);
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

GridProfile scaled_katz(const DiscretizedOperator& op, double scale, double theta, const char* what) {
  const double norm = operator_norm(op).value;
  if (!(std::abs(theta) * norm < 1.0)) {
    throw ConditionViolation(std::string(what) + ": θ·‖W‖ = " + format_double(std::abs(theta) * norm) + " ≥ 1");
  }
  const GridProfile r = resolvent_apply(op, theta, GridProfile::constant(op.grid(), 1.0));
  return GridProfile(op.grid(), scale * r.values());
}

}  // namespace

GridProfile closed_form_nash(const ClosedFormExample& ex, const DiscretizedOperator& op) {
  return std::visit(overloaded{
                        [&](const example::Beach&) { return scaled_katz(op, 1.0 / 3.0, 1.0 / 3.0, "beach game"); },
                        [&](const example::Cities& c) { return scaled_katz(op, c.k, c.theta, "cities game"); },
                        [&](const example::Cournot& c) {
                          return scaled_katz(op, c.a / (1.0 + 2.0 * c.b), c.c * (1.0 + c.b) / (1.0 + 2.0 * c.b),
                                             "Cournot game");
                        },
                    },
                    ex);
}

GridProfile closed_form_nash(const ClosedFormExample& ex, const Graphon& w, const Grid& grid) {
  return closed_form_nash(ex, discretize(w, grid));
}

CournotCheck cournot_closed_form_check(double a, double b, double c, const DiscretizedOperator& op) {
  const GameSpec spec = builtin_cournot(a, b, c, NoiseSpec::point_mass());
  GridProfile derived = closed_form_nash(example::Cournot{a, b, c}, op);
  const double derivedResidual = equilibrium_residual(spec, op, derived);
  std::optional<GridProfile> alternative;
  std::optional<double> alternativeResidual;
  try {
    const GridProfile r = resolvent_apply(op, c * (1.0 + b), GridProfile::constant(op.grid(), 1.0));
    alternative = GridProfile(op.grid(), (a / (1.0 + 2.0 * b)) * r.values());
    alternativeResidual = equilibrium_residual(spec, op, *alternative);
  } catch (const ConditionViolation&) {
  }
  return CournotCheck{std::move(derived), std::move(alternative), derivedResidual, alternativeResidual};
}

// ---------------------------------------------------------------------------
// Mean field reductions

std::optional<MFGSolution> mfg_reduce(const GameSpec& spec, const Graphon& w, const Grid& grid, double tol) {
  const DiscretizedOperator op = discretize(w, grid);
  const Eigen::VectorXd rows = op.row_integrals();
  const double a = rows.mean();
  if ((rows.array() - a).abs().maxCoeff() > tol) return std::nullopt;

  double z = 0.0;
  double alpha = best_response(spec, z);
  double step = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= 100000; ++it) {
    alpha = best_response(spec, z);
    const double next = a * drift_value(spec, alpha, z);
    step = std::abs(next - z);
    z = next;
    if (!std::isfinite(z)) break;
    if (step <= 1e-15 * (1.0 + std::abs(z))) {
      alpha = best_response(spec, z);
      return MFGSolution{alpha, z, a};
    }
    if (it > 200 && step > 1e6 * (1.0 + std::abs(a))) break;
  }
  throw NonConvergence("scalar mean field iteration did not converge", 100000, step);
}

Eigen::VectorXd k_population_solve(const GameSpec& spec, const Eigen::MatrixXd& W, double tol, int maxIter) {
  const auto K = static_cast<int>(W.rows());
  const DiscretizedOperator op = discretize(step_graphon_from_matrix(W), Grid(K));
  NashOptions opts;
  opts.tol = tol;
  opts.maxIter = maxIter;
  const EquilibriumReport r = solve_nash(spec, op, opts);
  if (!r.converged) throw NonConvergence("K-population iteration did not converge", r.iterations, r.residual);
  return r.profile.values();
}

// ---------------------------------------------------------------------------
// Social cost and planner

double social_cost(const GameSpec& spec, const DiscretizedOperator& op, const GridProfile& alpha) {
  AggregateOptions agg;
  agg.tol = 1e-15;
  const GridProfile z = solve_aggregate(spec, op, alpha, agg);
  Eigen::VectorXd J(alpha.size());
  for (int i = 0; i < alpha.size(); ++i) J[i] = reduced_cost(spec, alpha[i], z[i]);
  return integrate(GridProfile(op.grid(), std::move(J)), op.weights());
}

namespace {

double weighted_dot(const Eigen::VectorXd& q, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return (q.array() * u.array() * v.array()).sum();
}

struct QuadraticPlanner {
  const QuadraticCost& cost;
  const DiscretizedOperator& op;

  // Hessian of 𝒮 in the quadrature inner product: 2q2 + 2qz·W + 2rz2·W².
  Eigen::VectorXd hessian_apply(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd Wv = op.apply(v);
    Eigen::VectorXd out = 2.0 * cost.q2 * v + 2.0 * cost.qz * Wv;
    if (cost.rz2 != 0.0) out += 2.0 * cost.rz2 * op.apply(Wv);
    return out;
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& alpha) const {
    return hessian_apply(alpha) + Eigen::VectorXd::Constant(alpha.size(), cost.q1);
  }
};

void require_strictly_convex(const QuadraticCost& q, double wNorm) {
  const double bound = 2.0 * q.q2 - 2.0 * std::abs(q.qz) * wNorm - 2.0 * std::max(0.0, -q.rz2) * wNorm * wNorm;
  if (!(bound > 0.0)) {
    throw ConditionViolation("planner problem is not certified convex: 2q2 − 2|qz|‖W‖ − 2(rz2)₋‖W‖² = " +
                             format_double(bound) + " ≤ 0");
  }
}

PlannerReport quadratic_closed_form(const GameSpec& spec, const QuadraticCost& q, const DiscretizedOperator& op) {
  const int M = op.grid().size();
  const QuadraticPlanner planner{q, op};
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(M, -q.q1);
  Eigen::VectorXd alpha;
  int iterations = 1;
  if (q.rz2 == 0.0) {
    const Eigen::MatrixXd H = 2.0 * q.q2 * Eigen::MatrixXd::Identity(M, M) + 2.0 * q.qz * op.matrix();
    alpha = Eigen::PartialPivLU<Eigen::MatrixXd>(H).solve(rhs);
  } else {
    // Conjugate gradients in the quadrature inner product, where H is self-adjoint.
    const Eigen::VectorXd& w = op.weights();
    alpha = Eigen::VectorXd::Zero(M);
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd p = r;
    double rr = weighted_dot(w, r, r);
    const double stop = 1e-30 * std::max(1.0, weighted_dot(w, rhs, rhs));
    for (iterations = 0; iterations < 10 * M && rr > stop; ++iterations) {
      const Eigen::VectorXd Hp = planner.hessian_apply(p);
      const double pHp = weighted_dot(w, p, Hp);
      if (!(pHp > 0.0)) throw ConditionViolation("planner Hessian is not positive definite");
      const double t = rr / pHp;
      alpha += t * p;
      r -= t * Hp;
      const double rrNext = weighted_dot(w, r, r);
      p = r + (rrNext / rr) * p;
      rr = rrNext;
    }
  }
  const Eigen::VectorXd g = planner.gradient(alpha);
  GridProfile profile(op.grid(), std::move(alpha));
  const double cost = social_cost(spec, op, profile);
  return PlannerReport{std::move(profile), cost, "closed-form", iterations,
                       std::sqrt(weighted_dot(op.weights(), g, g))};
}

PlannerReport quadratic_descent(const GameSpec& spec, const QuadraticCost& q, const DiscretizedOperator& op,
                                const GradientDescent& gd) {
  const QuadraticPlanner planner{q, op};
  const Eigen::VectorXd& w = op.weights();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(op.grid().size());
  double gnorm = 0.0;
  for (int it = 0; it < gd.maxIter; ++it) {
    const Eigen::VectorXd g = planner.gradient(alpha);
    gnorm = std::sqrt(weighted_dot(w, g, g));
    if (gnorm <= gd.tol) {
      GridProfile profile(op.grid(), std::move(alpha));
      const double cost = social_cost(spec, op, profile);
      return PlannerReport{std::move(profile), cost, "gradient-descent", it, gnorm};
    }
    // Exact line search along −g for the quadratic objective.
    const double gHg = weighted_dot(w, g, planner.hessian_apply(g));
    if (!(gHg > 0.0)) throw ConditionViolation("social cost is not convex along the gradient direction");
    alpha -= (gnorm * gnorm / gHg) * g;
  }
  throw NonConvergence("planner gradient descent hit the iteration cap", gd.maxIter, gnorm);
}

PlannerReport finite_difference_descent(const GameSpec& spec, const DiscretizedOperator& op, const GradientDescent& gd) {
  const int M = op.grid().size();
  const Eigen::VectorXd& w = op.weights();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(M);
  const auto S = [&](const Eigen::VectorXd& a) { return social_cost(spec, op, GridProfile(op.grid(), a)); };
  double value = S(alpha);
  double gnorm = 0.0;
  for (int it = 0; it < gd.maxIter; ++it) {
    // Gradient in the quadrature inner product: (∂𝒮/∂α_i)/q_i.
    Eigen::VectorXd g(M);
    for (int i = 0; i < M; ++i) {
      const double h = 1e-5 * (1.0 + std::abs(alpha[i]));
      Eigen::VectorXd up = alpha, down = alpha;
      up[i] += h;
      down[i] -= h;
      g[i] = (S(up) - S(down)) / (2.0 * h) / w[i];
    }
    gnorm = std::sqrt(weighted_dot(w, g, g));
    if (gnorm <= gd.tol) {
      GridProfile profile(op.grid(), std::move(alpha));
      return PlannerReport{std::move(profile), value, "gradient-descent", it, gnorm};
    }
    double t = gd.step;
    Eigen::VectorXd trial;
    double trialValue = 0.0;
    for (int back = 0; back < 60; ++back, t *= 0.5) {
      trial = alpha - t * g;
      trialValue = S(trial);
      if (trialValue <= value - 1e-4 * t * gnorm * gnorm) break;
    }
    if (!(trialValue < value)) break;  // no descent possible at finite-difference accuracy
    alpha = std::move(trial);
    value = trialValue;
  }
  throw NonConvergence("planner gradient descent did not reach tolerance", gd.maxIter, gnorm);
}

}  // namespace

PlannerReport planner_optimum(const GameSpec& spec, const DiscretizedOperator& op, const PlannerMethod& method) {
  const auto* q = std::get_if<QuadraticCost>(&spec.cost);
  const bool quadratic = is_quadratic_identity(spec);
  if (quadratic) require_strictly_convex(*q, operator_norm(op).value);
  if (std::holds_alternative<ClosedFormPlanner>(method)) {
    if (!quadratic) throw ConfigError("closed-form planner needs an identity drift and a quadratic cost");
    return quadratic_closed_form(spec, *q, op);
  }
  const auto& gd = std::get<GradientDescent>(method);
  if (!(gd.tol > 0.0 && gd.step > 0.0)) throw ConfigError("gradient descent needs positive step and tolerance");
  if (quadratic) return quadratic_descent(spec, *q, op, gd);
  return finite_difference_descent(spec, op, gd);
}

namespace {

bool is_cities_type(const GameSpec& spec) {
  if (!is_quadratic_identity(spec)) return false;
  const auto& q = std::get<QuadraticCost>(spec.cost);
  return q.q2 == 0.5 && q.rz2 == 0.0 && q.rConst == 0.0 && q.rNoise == 0.0 && q.q1 < 0.0 && q.qz < 0.0;
}

}  // namespace

PoAReport price_of_anarchy(const GameSpec& spec, const DiscretizedOperator& op) {
  const double wNorm = operator_norm(op).value;
  NashOptions opts;
  opts.tol = 1e-13;
  opts.wNorm = wNorm;
  EquilibriumReport nash = solve_nash(spec, op, opts);
  if (!nash.converged) throw NonConvergence("Nash iteration did not converge", nash.iterations, nash.residual);
  PlannerReport planner = is_quadratic_identity(spec) ? planner_optimum(spec, op, ClosedFormPlanner{})
                                                      : planner_optimum(spec, op, GradientDescent{});
  const double nashCost = social_cost(spec, op, nash.profile);
  if (planner.socialCost == 0.0) throw ConditionViolation("price of anarchy undefined: optimal social cost is 0");
  std::optional<double> inner;
  if (is_cities_type(spec)) {
    const double theta = -std::get<QuadraticCost>(spec.cost).qz;
    const GridProfile one = GridProfile::constant(op.grid(), 1.0);
    const GridProfile r1 = resolvent_apply(op, theta, one);
    const GridProfile r2 = resolvent_apply(op, 2.0 * theta, one);
    inner = weighted_dot(op.weights(), r1.values(), r1.values()) / r2.values().dot(op.weights());
  }
  const double poa = nashCost / planner.socialCost;
  return PoAReport{poa, nashCost, planner.socialCost, inner, std::move(nash), std::move(planner)};
}

bool poa_feasible(const PoAFamily& family, double theta) {
  if (!(theta > 0.0)) return false;
  return std::visit(overloaded{
                        [&](const poa_family::ConstantStrength& c) {
                          return 1.0 - 2.0 * theta * c.a > 0.0 && 1.0 - theta * c.a > 0.0;
                        },
                        [&](const poa_family::PowerLaw& p) {
                          return p.gamma > 0.0 && p.gamma < 1.0 / 3.0 && 1.0 - 2.0 * p.gamma - 2.0 * theta > 0.0;
                        },
                        [&](const poa_family::NormalizedPowerLaw& p) {
                          const double g = p.g.value_or((1.0 - p.gamma) * (1.0 - p.gamma));
                          return p.gamma > 0.0 && p.gamma < 0.5 && 1.0 - 2.0 * p.gamma - 2.0 * theta * g > 0.0;
                        },
                        [&](const poa_family::Threshold&) { return 2.0 * theta * (2.0 / M_PI) < 1.0; },
                    },
                    family);
}

namespace {

double power_law_poa(double gamma, double t) {
  const double s = (1.0 - gamma) * (1.0 - gamma);
  const double u = 1.0 - 2.0 * gamma;
  const double num = 1.0 + t * u * (2.0 - 4.0 * gamma - t) / (s * (u - t) * (u - t));
  const double den = 1.0 + 2.0 * t * u / (s * (u - 2.0 * t));
  return num / den;
}

}  // namespace

double poa_closed_form(const PoAFamily& family, double theta) {
  if (!poa_feasible(family, theta)) {
    throw ConditionViolation("price of anarchy undefined: planner problem infeasible at θ = " + format_double(theta));
  }
  return std::visit(overloaded{
                        [&](const poa_family::ConstantStrength& c) {
                          const double ta = theta * c.a;
                          return (1.0 - 2.0 * ta) / ((1.0 - ta) * (1.0 - ta));
                        },
                        [&](const poa_family::PowerLaw& p) { return power_law_poa(p.gamma, theta); },
                        [&](const poa_family::NormalizedPowerLaw& p) {
                          // g·(xy)^{-γ} at strength θ is the plain power law at strength θg.
                          const double g = p.g.value_or((1.0 - p.gamma) * (1.0 - p.gamma));
                          return power_law_poa(p.gamma, theta * g);
                        },
                        [&](const poa_family::Threshold&) {
                          const double t2 = 2.0 * theta;
                          return (2.0 * theta / (1.0 - std::sin(theta))) *
                                 ((1.0 - std::sin(t2)) / (std::cos(t2) + std::sin(t2) - 1.0));
                        },
                    },
                    family);
}

double stability_bound(const GameSpec& spec, double wNorm, double wNormPrime, double c0) {
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ConfigError("c0 must be finite and nonnegative");
  const Certificate a = certify(spec, wNorm);
  const Certificate b = certify(spec, wNormPrime);
  if (!a.uniquenessOk || !b.uniquenessOk) {
    throw ConditionViolation("stability bound needs the uniqueness condition for both graphons (values " +
                             format_double(a.uniquenessValue) + ", " + format_double(b.uniquenessValue) + ")");
  }
  const auto& k = spec.bundle;
  const double m = 1.0 - std::sqrt(k.c_z) * wNorm;
  const double denom = m * (k.ell_c * m - k.ell_J * std::sqrt(k.c_alpha) * wNorm);
  return c0 * k.ell_J * m / denom;
}

// ---------------------------------------------------------------------------
// Analytic profiles

namespace analytic {

double beach_constant(double a) { return 1.0 / (3.0 - a); }

double beach_power_law(double gamma, double x) {
  return 1.0 / 3.0 + (1.0 - 2.0 * gamma) / (6.0 * (1.0 - gamma) * (1.0 - 3.0 * gamma)) * std::pow(x, -gamma);
}

double beach_threshold(double x) {
  const double c = 1.0 / (3.0 * (1.0 - std::sin(1.0 / 3.0)));
  return c * (std::cos((1.0 - x) / 3.0) - std::sin(x / 3.0));
}

double cities_threshold_nash(double k, double theta, double x) {
  return k / (1.0 - std::sin(theta)) * (std::cos(theta * (1.0 - x)) - std::sin(theta * x));
}

double cities_threshold_planner(double k, double theta, double x) { return cities_threshold_nash(k, 2.0 * theta, x); }

double minmax_resolvent(double x, int terms) {
  // 1 + Σ_odd (θλ_k/(1−θλ_k))⟨1,φ_k⟩φ_k with θ = 1/3, λ_k = 1/(π²k²), φ_k = √2 sin(kπx).
  double s = 1.0;
  for (int m = 0; m < terms; ++m) {
    const double k = 2.0 * m + 1.0;
    s += 4.0 * std::sin(k * M_PI * x) / (k * M_PI * (3.0 * M_PI * M_PI * k * k - 1.0));
  }
  return s;
}

double minmax_resolvent_literal(double x, int terms) {
  double s = 0.0;
  for (int m = 0; m < terms; ++m) {
    const double k = 2.0 * m + 1.0;
    s += k * std::sin(k * M_PI * x) / (3.0 * M_PI * M_PI * k * k - 1.0);
  }
  return 12.0 * M_PI * s;
}

}  // namespace analytic

nlohmann::json to_json(const EquilibriumReport& r) {
  return {{"iterations", r.iterations},
          {"residual", r.residual},
          {"converged", r.converged},
          {"certificate", to_json(r.certificate)}};
}

nlohmann::json to_json(const PlannerReport& r) {
  return {{"method", r.method},
          {"iterations", r.iterations},
          {"socialCost", r.socialCost},
          {"gradientNorm", r.gradientNorm}};
}

}  // namespace graphon_games
