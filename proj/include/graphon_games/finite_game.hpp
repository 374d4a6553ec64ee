#pragma once

#include "graphon_games/game.hpp"
#include "graphon_games/graphon.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>

namespace graphon_games {

/// N players interacting through z_i = (1/N) Σ_j W_ij X_j.
struct FiniteGame {
  int N;
  Eigen::MatrixXd W;
  GameSpec spec;
};

FiniteGame make_finite_game(Eigen::MatrixXd W, GameSpec spec);
FiniteGame finite_game_from_sample(const SampledGraph& g, GameSpec spec);

/// ((1/N²) Σ_ij W_ij²)^{1/2}.
double frobenius_scaled(const FiniteGame& game);
/// ‖W/N‖ as a matrix operator norm.
double scaled_operator_norm(const FiniteGame& game);

struct NoiseBatch {
  Eigen::MatrixXd samples;  ///< S × N, row s is one draw of (ξ_1, …, ξ_N)
  std::uint64_t seed;
};

NoiseBatch draw_noise(const NoiseSpec& noise, int S, int N, std::uint64_t seed);

/// Row s solves z = (1/N) W (b(α, z) + ξ(ω_s)).
Eigen::MatrixXd aggregate_samples(const FiniteGame& game, const Eigen::VectorXd& alpha, const NoiseBatch& noise,
                                  double tol = 1e-13);

enum class CostMode { Auto, Analytic, MonteCarlo };

struct CostEstimate {
  double value;
  double stdError;  ///< 0 for the analytic path
  bool analytic;
};

/// True when J_i has the exact mean/variance form: identity drift, quadratic
/// cost, zero diagonal.
bool analytic_cost_available(const FiniteGame& game);

/// J_i(α) = 𝔼 f(X_i, α_i, z_i).
CostEstimate expected_cost(const FiniteGame& game, int i, const Eigen::VectorXd& alpha, const NoiseBatch* noise,
                           CostMode mode = CostMode::Auto);

struct FiniteClosedForm {};
struct BestResponseIteration {
  double tol = 1e-12;
  int maxIter = 10000;
  double damping = 1.0;
  bool overrideCondition = false;
};
using FiniteMethod = std::variant<FiniteClosedForm, BestResponseIteration>;

struct FiniteNashResult {
  Eigen::VectorXd alpha;
  int iterations;
  double residual;
  Certificate certificate;  ///< computed with ‖W/N‖
};

/// Closed form solves (2q2·I + (qz/N)·W) α = −q1·1. Best-response iteration uses
/// the deterministic reduction when available, otherwise Monte Carlo costs on
/// `noise` with common random numbers.
FiniteNashResult solve_nash_finite(const FiniteGame& game, const FiniteMethod& method,
                                   const NoiseBatch* noise = nullptr);

struct BetaGrid {
  double lo = -2.0;
  double hi = 2.0;
  int steps = 41;
};

struct EpsilonReport {
  double epsilon;
  double stdError;  ///< standard error of the cost gap at the worst player (0 when analytic)
  int worstPlayer;
  bool analytic;
};

/// ε = max_i [J_i(α) − min_β J_i(β; α_{−i})] over the grid, the analytic best
/// response and α_i itself; deviations reuse the same noise draws.
EpsilonReport epsilon_nash_certify(const FiniteGame& game, const Eigen::VectorXd& alpha, const BetaGrid& grid,
                                   const NoiseBatch* noise, CostMode mode = CostMode::Auto);

/// CSV with header `i,alpha`.
void write_alpha_csv(std::ostream& os, const Eigen::VectorXd& alpha);
Eigen::VectorXd read_alpha_csv(std::istream& is);

}  // namespace graphon_games
