#include "graphon_games/game.hpp"

#include "graphon_games/errors.hpp"
#include "graphon_games/graphon_equilibrium.hpp"
#include "text_util.hpp"

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

}  // namespace

// ---------------------------------------------------------------------------
// Noise

NoiseSpec NoiseSpec::gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("Gaussian noise needs sigma >= 0");
  return NoiseSpec{noise::Gaussian{sigma}};
}

NoiseSpec NoiseSpec::uniform(double halfWidth) {
  if (!(halfWidth >= 0.0) || !std::isfinite(halfWidth)) throw ConfigError("uniform noise needs halfWidth >= 0");
  return NoiseSpec{noise::Uniform{halfWidth}};
}

NoiseSpec NoiseSpec::point_mass() { return NoiseSpec{noise::PointMass{}}; }

double NoiseSpec::variance() const {
  return std::visit(overloaded{
                        [](const noise::Gaussian& g) { return g.sigma * g.sigma; },
                        [](const noise::Uniform& u) { return u.halfWidth * u.halfWidth / 3.0; },
                        [](const noise::PointMass&) { return 0.0; },
                    },
                    distribution);
}

double NoiseSpec::draw(std::mt19937_64& rng) const {
  return std::visit(overloaded{
                        [&](const noise::Gaussian& g) {
                          if (g.sigma == 0.0) return 0.0;
                          return std::normal_distribution<double>(0.0, g.sigma)(rng);
                        },
                        [&](const noise::Uniform& u) {
                          if (u.halfWidth == 0.0) return 0.0;
                          return std::uniform_real_distribution<double>(-u.halfWidth, u.halfWidth)(rng);
                        },
                        [](const noise::PointMass&) { return 0.0; },
                    },
                    distribution);
}

std::string NoiseSpec::describe() const {
  return std::visit(overloaded{
                        [](const noise::Gaussian& g) { return "gaussian:" + format_double(g.sigma); },
                        [](const noise::Uniform& u) { return "uniform:" + format_double(u.halfWidth); },
                        [](const noise::PointMass&) { return std::string("pointmass"); },
                    },
                    distribution);
}

NoiseSpec parse_noise(const std::string& text) {
  const auto [name, rest] = detail::split_name(text);
  const detail::Params params(rest);
  if (name == "gaussian") return NoiseSpec::gaussian(params.get_or("sigma", 0, 1.0));
  if (name == "uniform") return NoiseSpec::uniform(params.get("halfWidth", 0));
  if (name == "pointmass" || name == "none") return NoiseSpec::point_mass();
  throw ConfigError("unknown noise law `" + name + "` (expected gaussian | uniform | pointmass)");
}

// ---------------------------------------------------------------------------
// Specs

void validate_spec(const GameSpec& spec) {
  const auto& b = spec.bundle;
  for (double v : {b.c_alpha, b.c_z, b.ell_J, b.ell_J_tilde}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("bundle constants must be finite and nonnegative");
  }
  if (!(b.ell_c > 0.0)) throw ConfigError("strong convexity constant ell_c must be positive");
  if (b.c0 && !(*b.c0 >= 0.0)) throw ConfigError("c0 must be nonnegative");
  if (const auto* q = std::get_if<QuadraticCost>(&spec.cost); q && !(q->q2 > 0.0)) {
    throw ConfigError("quadratic cost needs q2 > 0");
  }
  if (const auto* d = std::get_if<CustomDrift>(&spec.drift)) {
    if (!d->b) throw ConfigError("custom drift has no evaluator");
    if (!(d->sqrt_c_alpha >= 0.0 && d->sqrt_c_z >= 0.0)) throw ConfigError("drift Lipschitz constants must be >= 0");
  }
  if (const auto* c = std::get_if<CustomCost>(&spec.cost)) {
    if (!c->J || !c->dJ) throw ConfigError("custom cost needs both J and dJ evaluators");
  }
  if (spec.actions && !(spec.actions->lo < spec.actions->hi)) throw ConfigError("action interval must have lo < hi");
}

GameSpec make_spec(std::string name, DriftSpec drift, CostSpec cost, NoiseSpec noise,
                   std::optional<StateCost> stateCost) {
  GameSpec spec;
  spec.name = std::move(name);
  spec.drift = std::move(drift);
  spec.cost = std::move(cost);
  spec.noise = noise;
  spec.stateCost = stateCost;

  auto& b = spec.bundle;
  std::visit(overloaded{
                 [&](const IdentityDrift&) {
                   b.c_alpha = 1.0;
                   b.c_z = 0.0;
                 },
                 [&](const AffineDrift& d) {
                   b.c_alpha = d.b1 * d.b1;
                   b.c_z = d.c1 * d.c1;
                 },
                 [&](const CustomDrift& d) {
                   b.c_alpha = d.sqrt_c_alpha * d.sqrt_c_alpha;
                   b.c_z = d.sqrt_c_z * d.sqrt_c_z;
                 },
             },
             spec.drift);
  std::visit(overloaded{
                 [&](const QuadraticCost& q) {
                   b.ell_c = 2.0 * q.q2;
                   b.ell_J = std::abs(q.qz);
                   // ∂_α𝒥 − ∂_α𝒥′ is qz·(z − z′); over |α| ≤ A the measure-level Lipschitz
                   // constant picks up the √2-weighted action bound.
                   b.ell_J_tilde = std::abs(q.qz) * kDefaultActionBound * std::sqrt(2.0);
                 },
                 [&](const CustomCost& c) {
                   b.ell_c = c.ell_c;
                   b.ell_J = c.ell_J;
                   b.ell_J_tilde = c.ell_J_tilde;
                 },
             },
             spec.cost);
  validate_spec(spec);
  return spec;
}

double drift_value(const GameSpec& spec, double alpha, double z) {
  return std::visit(overloaded{
                        [&](const IdentityDrift&) { return alpha; },
                        [&](const AffineDrift& d) { return d.a0 - d.b1 * alpha + d.c1 * z; },
                        [&](const CustomDrift& d) { return d.b(alpha, z); },
                    },
                    spec.drift);
}

double reduced_cost(const GameSpec& spec, double alpha, double z) {
  return std::visit(overloaded{
                        [&](const QuadraticCost& q) {
                          return q.q2 * alpha * alpha + q.q1 * alpha + q.qz * alpha * z + q.rz2 * z * z + q.rConst +
                                 q.rNoise * spec.noise.variance();
                        },
                        [&](const CustomCost& c) { return c.J(alpha, z); },
                    },
                    spec.cost);
}

double cost_gradient(const GameSpec& spec, double alpha, double z) {
  return std::visit(overloaded{
                        [&](const QuadraticCost& q) { return 2.0 * q.q2 * alpha + q.q1 + q.qz * z; },
                        [&](const CustomCost& c) { return c.dJ(alpha, z); },
                    },
                    spec.cost);
}

std::optional<double> analytic_best_response(const GameSpec& spec, double z) {
  const auto* q = std::get_if<QuadraticCost>(&spec.cost);
  if (!q) return std::nullopt;
  double a = -(q->q1 + q->qz * z) / (2.0 * q->q2);
  if (spec.actions) a = std::clamp(a, spec.actions->lo, spec.actions->hi);
  return a;
}

bool is_quadratic_identity(const GameSpec& spec) {
  return std::holds_alternative<IdentityDrift>(spec.drift) && std::holds_alternative<QuadraticCost>(spec.cost) &&
         !spec.actions;
}

GameSpec builtin_beach(NoiseSpec noise) {
  // f(x,α,z) = α² + (x−1)² + (x−z)² with x = α + ξ.
  StateCost f;
  f.xx = 2.0;
  f.x = -2.0;
  f.xz = -2.0;
  f.aa = 1.0;
  f.zz = 1.0;
  f.c = 1.0;
  return make_spec("beach", IdentityDrift{}, QuadraticCost{3.0, -2.0, -2.0, 1.0, 2.0, 1.0}, noise, f);
}

GameSpec builtin_cities(double k, double theta, NoiseSpec noise) {
  if (!(k > 0.0) || !(theta > 0.0)) throw ConfigError("cities game needs k > 0 and theta > 0");
  StateCost f;
  f.aa = 0.5;
  f.a = -k;
  f.az = -theta;
  auto spec = make_spec("cities", IdentityDrift{}, QuadraticCost{0.5, -k, -theta}, noise, f);
  return spec;
}

GameSpec builtin_cournot(double a, double b, double c, NoiseSpec noise) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw ConfigError("Cournot game needs a, b, c > 0");
  // f(x,α,z) = ½α² − αx: quadratic production cost minus revenue at price x.
  StateCost f;
  f.aa = 0.5;
  f.xa = -1.0;
  return make_spec("cournot", AffineDrift{a, b, c}, QuadraticCost{b + 0.5, -a, -c}, noise, f);
}

GameSpec builtin_monotone_example(NoiseSpec noise) {
  StateCost f;
  f.aa = 1.5;
  f.xx = -1.0;
  f.xz = 2.0;
  f.zz = -1.0;
  return make_spec("monotone", IdentityDrift{}, QuadraticCost{0.5, 0.0, 2.0, 0.0, -1.0, -1.0}, noise, f);
}

GameSpec parse_game(const std::string& text) {
  const auto [name, rest] = detail::split_name(text);
  const detail::Params params(rest);
  NoiseSpec noise;
  if (params.has("sigma")) noise = NoiseSpec::gaussian(params.get("sigma", -1));
  if (params.has("uniform")) noise = NoiseSpec::uniform(params.get("uniform", -1));
  if (params.has("pointmass")) noise = NoiseSpec::point_mass();
  if (name == "beach") return builtin_beach(noise);
  if (name == "cities") return builtin_cities(params.get_or("k", -1, 1.0), params.get("theta", -1), noise);
  if (name == "cournot") return builtin_cournot(params.get("a", -1), params.get("b", -1), params.get("c", -1), noise);
  if (name == "monotone") return builtin_monotone_example(noise);
  throw ConfigError("unknown game `" + name + "` (expected beach | cities | cournot | monotone)");
}

// ---------------------------------------------------------------------------
// Certificates

Certificate certify(const GameSpec& spec, double wNorm) {
  if (!(wNorm >= 0.0)) throw ConfigError("operator norm must be nonnegative");
  Certificate c;
  c.wNorm = wNorm;
  const double sa = std::sqrt(spec.bundle.c_alpha);
  const double sz = std::sqrt(spec.bundle.c_z);
  c.contractionMargin = 1.0 - sz * wNorm;
  c.contractionOk = c.contractionMargin > 0.0;
  if (c.contractionOk) {
    c.uniquenessValue = (spec.bundle.ell_J / spec.bundle.ell_c) * sa * wNorm / c.contractionMargin;
  } else {
    c.uniquenessValue = std::numeric_limits<double>::infinity();
  }
  c.uniquenessOk = c.contractionOk && c.uniquenessValue < 1.0;
  return c;
}

MonotonicityReport monotonicity_probe(const GameSpec& spec, const DiscretizedOperator& op, int nPairs,
                                      std::uint64_t seed) {
  if (nPairs < 0) throw ConfigError("nPairs must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int M = op.grid().size();
  AggregateOptions aggOpts;
  aggOpts.wNorm = operator_norm(op).value;
  MonotonicityReport report;
  report.samples = nPairs;
  for (int p = 0; p < nPairs; ++p) {
    Eigen::VectorXd a1(M), a2(M);
    for (int i = 0; i < M; ++i) a1[i] = u(rng);
    for (int i = 0; i < M; ++i) a2[i] = u(rng);
    const GridProfile alpha1(op.grid(), a1);
    const GridProfile alpha2(op.grid(), a2);
    const GridProfile z1 = solve_aggregate(spec, op, alpha1, aggOpts);
    const GridProfile z2 = solve_aggregate(spec, op, alpha2, aggOpts);
    bool somewhereNonNegative = false;
    for (int i = 0; i < M && !somewhereNonNegative; ++i) {
      const double v = reduced_cost(spec, a1[i], z1[i]) - reduced_cost(spec, a1[i], z2[i]) -
                       reduced_cost(spec, a2[i], z1[i]) + reduced_cost(spec, a2[i], z2[i]);
      // Rounding noise of the four-term difference is not a sign.
      const double scale = 1e-12 * (1.0 + std::abs(reduced_cost(spec, a1[i], z1[i])));
      somewhereNonNegative = v >= -scale;
    }
    if (!somewhereNonNegative) ++report.violations;
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json noise_json(const NoiseSpec& n) {
  return std::visit(overloaded{
                        [](const noise::Gaussian& g) { return nlohmann::json{{"type", "gaussian"}, {"sigma", g.sigma}}; },
                        [](const noise::Uniform& u) {
                          return nlohmann::json{{"type", "uniform"}, {"halfWidth", u.halfWidth}};
                        },
                        [](const noise::PointMass&) { return nlohmann::json{{"type", "pointmass"}}; },
                    },
                    n.distribution);
}

NoiseSpec noise_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "gaussian") return NoiseSpec::gaussian(j.at("sigma").get<double>());
  if (type == "uniform") return NoiseSpec::uniform(j.at("halfWidth").get<double>());
  if (type == "pointmass") return NoiseSpec::point_mass();
  throw ConfigError("unknown noise type `" + type + "`");
}

}  // namespace

nlohmann::json to_json(const GameSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["drift"] = std::visit(overloaded{
                              [](const IdentityDrift&) { return nlohmann::json{{"type", "identity"}}; },
                              [](const AffineDrift& d) {
                                return nlohmann::json{{"type", "affine"}, {"a0", d.a0}, {"b1", d.b1}, {"c1", d.c1}};
                              },
                              [](const CustomDrift&) -> nlohmann::json {
                                throw ConfigError("custom drifts cannot be serialized");
                              },
                          },
                          spec.drift);
  j["cost"] = std::visit(overloaded{
                             [](const QuadraticCost& q) {
                               return nlohmann::json{{"type", "quadratic"}, {"q2", q.q2},       {"q1", q.q1},
                                                     {"qz", q.qz},          {"rConst", q.rConst}, {"rNoise", q.rNoise},
                                                     {"rz2", q.rz2}};
                             },
                             [](const CustomCost&) -> nlohmann::json {
                               throw ConfigError("custom costs cannot be serialized");
                             },
                         },
                         spec.cost);
  j["noise"] = noise_json(spec.noise);
  const auto& b = spec.bundle;
  j["bundle"] = {{"c_alpha", b.c_alpha}, {"c_z", b.c_z},       {"ell_c", b.ell_c},
                 {"ell_J", b.ell_J},     {"ell_J_tilde", b.ell_J_tilde}};
  j["bundle"]["c0"] = b.c0 ? nlohmann::json(*b.c0) : nlohmann::json(nullptr);
  if (spec.stateCost) {
    const auto& f = *spec.stateCost;
    j["stateCost"] = {{"xx", f.xx}, {"x", f.x},   {"xz", f.xz}, {"xa", f.xa}, {"aa", f.aa},
                      {"a", f.a},   {"az", f.az}, {"zz", f.zz}, {"z", f.z},   {"c", f.c}};
  } else {
    j["stateCost"] = nullptr;
  }
  j["actions"] = spec.actions ? nlohmann::json::array({spec.actions->lo, spec.actions->hi}) : nlohmann::json(nullptr);
  return j;
}

GameSpec spec_from_json(const nlohmann::json& j) {
  try {
    GameSpec spec;
    spec.name = j.at("name").get<std::string>();
    const auto& d = j.at("drift");
    const auto dtype = d.at("type").get<std::string>();
    if (dtype == "identity") {
      spec.drift = IdentityDrift{};
    } else if (dtype == "affine") {
      spec.drift = AffineDrift{d.at("a0").get<double>(), d.at("b1").get<double>(), d.at("c1").get<double>()};
    } else {
      throw ConfigError("unknown drift type `" + dtype + "`");
    }
    const auto& c = j.at("cost");
    if (c.at("type").get<std::string>() != "quadratic") throw ConfigError("only quadratic costs deserialize");
    spec.cost = QuadraticCost{c.at("q2").get<double>(),     c.at("q1").get<double>(),
                              c.at("qz").get<double>(),     c.at("rConst").get<double>(),
                              c.at("rNoise").get<double>(), c.value("rz2", 0.0)};
    spec.noise = noise_from_json(j.at("noise"));
    const auto& b = j.at("bundle");
    spec.bundle.c_alpha = b.at("c_alpha").get<double>();
    spec.bundle.c_z = b.at("c_z").get<double>();
    spec.bundle.ell_c = b.at("ell_c").get<double>();
    spec.bundle.ell_J = b.at("ell_J").get<double>();
    spec.bundle.ell_J_tilde = b.at("ell_J_tilde").get<double>();
    if (b.contains("c0") && !b.at("c0").is_null()) spec.bundle.c0 = b.at("c0").get<double>();
    if (j.contains("stateCost") && !j.at("stateCost").is_null()) {
      const auto& f = j.at("stateCost");
      StateCost s;
      s.xx = f.at("xx").get<double>();
      s.x = f.at("x").get<double>();
      s.xz = f.at("xz").get<double>();
      s.xa = f.at("xa").get<double>();
      s.aa = f.at("aa").get<double>();
      s.a = f.at("a").get<double>();
      s.az = f.at("az").get<double>();
      s.zz = f.at("zz").get<double>();
      s.z = f.at("z").get<double>();
      s.c = f.at("c").get<double>();
      spec.stateCost = s;
    }
    if (j.contains("actions") && !j.at("actions").is_null()) {
      spec.actions = ActionInterval{j.at("actions").at(0).get<double>(), j.at("actions").at(1).get<double>()};
    }
    validate_spec(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed game spec: ") + e.what());
  }
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j{{"wNorm", c.wNorm},
                   {"contractionMargin", c.contractionMargin},
                   {"contractionOk", c.contractionOk},
                   {"uniquenessOk", c.uniquenessOk}};
  // JSON has no infinity; an absent value means the contraction condition failed.
  j["uniquenessValue"] = std::isfinite(c.uniquenessValue) ? nlohmann::json(c.uniquenessValue) : nlohmann::json(nullptr);
  return j;
}

}  // namespace graphon_games
