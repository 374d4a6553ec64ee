#pragma once

#include "graphon_games/graphon.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>

namespace graphon_games {

// ---------------------------------------------------------------------------
// Noise law μ₀ (always mean zero)

namespace noise {
struct Gaussian {
  double sigma;
};
struct Uniform {
  double halfWidth;
};
struct PointMass {};
}  // namespace noise

struct NoiseSpec {
  std::variant<noise::Gaussian, noise::Uniform, noise::PointMass> distribution = noise::Gaussian{1.0};

  static NoiseSpec gaussian(double sigma);
  static NoiseSpec uniform(double halfWidth);
  static NoiseSpec point_mass();

  /// 𝔼[ξ₀²].
  double variance() const;
  double draw(std::mt19937_64& rng) const;
  std::string describe() const;
};

NoiseSpec parse_noise(const std::string& text);

// ---------------------------------------------------------------------------
// Drift b(α, z); the state is X = b(α, z) + ξ.

struct IdentityDrift {};
/// b(α,z) = a0 − b1·α + c1·z.
struct AffineDrift {
  double a0;
  double b1;
  double c1;
};
struct CustomDrift {
  std::function<double(double, double)> b;
  double sqrt_c_alpha;
  double sqrt_c_z;
  std::string label = "custom";
};
using DriftSpec = std::variant<IdentityDrift, AffineDrift, CustomDrift>;

// ---------------------------------------------------------------------------
// Reduced cost 𝒥(α, z)

/// 𝒥(α,z) = q2·α² + q1·α + qz·α·z + rz2·z² + rConst + rNoise·𝔼[ξ₀²].
struct QuadraticCost {
  double q2;
  double q1 = 0.0;
  double qz = 0.0;
  double rConst = 0.0;
  double rNoise = 0.0;
  double rz2 = 0.0;
};
struct CustomCost {
  std::function<double(double, double)> J;
  std::function<double(double, double)> dJ;  ///< ∂_α𝒥
  double ell_c;
  double ell_J;
  double ell_J_tilde;
  std::string label = "custom";
};
using CostSpec = std::variant<QuadraticCost, CustomCost>;

/// Optional underlying running cost f(X, α, z), quadratic in all three
/// arguments. Only Monte Carlo cost evaluation in finite games needs it.
struct StateCost {
  double xx = 0, x = 0, xz = 0, xa = 0, aa = 0, a = 0, az = 0, zz = 0, z = 0, c = 0;
  double operator()(double X, double alpha, double zz_) const {
    return xx * X * X + x * X + xz * X * zz_ + xa * X * alpha + aa * alpha * alpha + a * alpha + az * alpha * zz_ +
           zz * zz_ * zz_ + z * zz_ + c;
  }
};

struct ActionInterval {
  double lo;
  double hi;
};

/// Lipschitz / convexity constants of the standing assumptions.
struct ConstantBundle {
  double c_alpha = 0.0;  ///< drift Lipschitz constant in α, squared form
  double c_z = 0.0;      ///< drift Lipschitz constant in z, squared form
  double ell_c = 0.0;    ///< strong convexity of 𝒥 in α
  double ell_J = 0.0;    ///< Lipschitz constant of ∂_α𝒥 in z
  double ell_J_tilde = 0.0;
  std::optional<double> c0;  ///< bound on |b|, absent when b is unbounded
};

struct GameSpec {
  std::string name = "custom";
  DriftSpec drift = IdentityDrift{};
  CostSpec cost = QuadraticCost{1.0};
  NoiseSpec noise;
  ConstantBundle bundle;
  std::optional<StateCost> stateCost;
  std::optional<ActionInterval> actions;
};

/// Working action bound used for ℓ̃_J of quadratic costs.
inline constexpr double kDefaultActionBound = 10.0;

/// Fills the bundle for Identity/Affine drifts and quadratic costs and validates it.
GameSpec make_spec(std::string name, DriftSpec drift, CostSpec cost, NoiseSpec noise,
                   std::optional<StateCost> stateCost = std::nullopt);

void validate_spec(const GameSpec& spec);

double drift_value(const GameSpec& spec, double alpha, double z);
double reduced_cost(const GameSpec& spec, double alpha, double z);
double cost_gradient(const GameSpec& spec, double alpha, double z);

/// argmin_α 𝒥(α, z) in closed form for quadratic costs (clamped to the action interval if any).
std::optional<double> analytic_best_response(const GameSpec& spec, double z);

bool is_quadratic_identity(const GameSpec& spec);

GameSpec builtin_beach(NoiseSpec noise = {});
GameSpec builtin_cities(double k, double theta, NoiseSpec noise = {});
GameSpec builtin_cournot(double a, double b, double c, NoiseSpec noise = {});
/// f = (3/2)α² − (x − z)²: a cost satisfying the Lasry–Lions monotonicity condition.
GameSpec builtin_monotone_example(NoiseSpec noise = {});

/// `beach`, `cities:k=1,theta=0.25`, `cournot:a=1,b=1,c=0.2`, `monotone`; any of them
/// accepts `sigma=S` (Gaussian) or `uniform=H` or `pointmass=1` for the noise law.
GameSpec parse_game(const std::string& text);

struct Certificate {
  double wNorm = 0.0;
  double contractionMargin = 0.0;
  double uniquenessValue = 0.0;
  bool contractionOk = false;
  bool uniquenessOk = false;
};

Certificate certify(const GameSpec& spec, double wNorm);

struct MonotonicityReport {
  int violations = 0;
  int samples = 0;
};

/// Random-pair probe of the monotonicity integrand; a pair violates when the
/// integrand is negative on every grid cell.
MonotonicityReport monotonicity_probe(const GameSpec& spec, const DiscretizedOperator& op, int nPairs,
                                      std::uint64_t seed);

nlohmann::json to_json(const GameSpec& spec);
/// Inverse of to_json for Identity/Affine drifts and quadratic costs.
GameSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Certificate& c);

}  // namespace graphon_games
