#include "graphon_games/finite_game.hpp"

#include "graphon_games/errors.hpp"
#include "graphon_games/graphon_equilibrium.hpp"
#include "text_util.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

namespace graphon_games {

FiniteGame make_finite_game(Eigen::MatrixXd W, GameSpec spec) {
  if (W.rows() != W.cols() || W.rows() < 1) throw ConfigError("interaction matrix must be square and non-empty");
  if (!W.allFinite()) throw ConfigError("interaction matrix has non-finite entries");
  const double scale = 1.0 + W.cwiseAbs().maxCoeff();
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) throw ConfigError("interaction matrix must be symmetric");
  validate_spec(spec);
  const auto N = static_cast<int>(W.rows());
  return FiniteGame{N, std::move(W), std::move(spec)};
}

FiniteGame finite_game_from_sample(const SampledGraph& g, GameSpec spec) { return make_finite_game(g.W, std::move(spec)); }

double frobenius_scaled(const FiniteGame& game) { return game.W.norm() / game.N; }

double scaled_operator_norm(const FiniteGame& game) {
  return symmetric_matrix_norm(game.W / static_cast<double>(game.N)).value;
}

NoiseBatch draw_noise(const NoiseSpec& noise, int S, int N, std::uint64_t seed) {
  if (S < 1 || N < 1) throw ConfigError("noise batch needs S >= 1 and N >= 1");
  std::mt19937_64 rng(seed);
  NoiseBatch batch{Eigen::MatrixXd(S, N), seed};
  // Row-major fill so that a batch with more samples extends a smaller one.
  for (int s = 0; s < S; ++s)
    for (int j = 0; j < N; ++j) batch.samples(s, j) = noise.draw(rng);
  return batch;
}

namespace {

void check_profile(const FiniteGame& game, const Eigen::VectorXd& alpha) {
  if (alpha.size() != game.N) throw ConfigError("profile length does not match the player count");
  if (!alpha.allFinite()) throw ConfigError("profile has non-finite entries");
}

void check_noise(const FiniteGame& game, const NoiseBatch* noise) {
  if (!noise) throw ConfigError("Monte Carlo evaluation needs a noise batch");
  if (noise->samples.cols() != game.N) throw ConfigError("noise batch width does not match the player count");
}

bool zero_diagonal(const FiniteGame& game) { return (game.W.diagonal().array() == 0.0).all(); }

// Samples of z_i for player i. With identity drift and W_ii = 0 they do not
// depend on α_i, so a deviation leaves them unchanged.
Eigen::VectorXd identity_aggregate_column(const FiniteGame& game, int i, const Eigen::VectorXd& alpha,
                                          const NoiseBatch& noise) {
  const double mean = game.W.row(i).dot(alpha) / game.N;
  return (noise.samples * game.W.row(i).transpose()) / game.N + Eigen::VectorXd::Constant(noise.samples.rows(), mean);
}

Eigen::VectorXd cost_samples(const FiniteGame& game, int i, double action, const Eigen::VectorXd& zcol,
                             const NoiseBatch& noise) {
  const auto S = noise.samples.rows();
  Eigen::VectorXd out(S);
  for (Eigen::Index s = 0; s < S; ++s) {
    const double z = zcol[s];
    if (game.spec.stateCost) {
      const double X = drift_value(game.spec, action, z) + noise.samples(s, i);
      out[s] = (*game.spec.stateCost)(X, action, z);
    } else {
      // 𝒥 already integrates the player's own noise.
      out[s] = reduced_cost(game.spec, action, z);
    }
  }
  return out;
}

// z_i samples for the profile with α_i replaced by `action`.
Eigen::VectorXd deviation_aggregate(const FiniteGame& game, int i, double action, const Eigen::VectorXd& alpha,
                                    const NoiseBatch& noise) {
  if (std::holds_alternative<IdentityDrift>(game.spec.drift) && game.W(i, i) == 0.0) {
    return identity_aggregate_column(game, i, alpha, noise);
  }
  Eigen::VectorXd dev = alpha;
  dev[i] = action;
  return aggregate_samples(game, dev, noise).col(i);
}

double mean(const Eigen::VectorXd& v) { return v.mean(); }

double std_error(const Eigen::VectorXd& v) {
  const auto S = v.size();
  if (S < 2) return 0.0;
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(S - 1) / static_cast<double>(S));
}

double analytic_cost(const FiniteGame& game, int i, double action, const Eigen::VectorXd& alpha) {
  const auto& q = std::get<QuadraticCost>(game.spec.cost);
  double zbar = 0.0;
  for (int j = 0; j < game.N; ++j) {
    if (j != i) zbar += game.W(i, j) * alpha[j];
  }
  zbar /= game.N;
  const double var = game.W.row(i).squaredNorm() * game.spec.noise.variance() / (double(game.N) * game.N);
  return reduced_cost(game.spec, action, zbar) + q.rz2 * var;
}

bool use_analytic(const FiniteGame& game, CostMode mode) {
  if (mode == CostMode::MonteCarlo) return false;
  const bool available = analytic_cost_available(game);
  if (mode == CostMode::Analytic && !available) {
    throw ConfigError("analytic costs need identity drift, quadratic cost and a zero diagonal");
  }
  return available;
}

}  // namespace

Eigen::MatrixXd aggregate_samples(const FiniteGame& game, const Eigen::VectorXd& alpha, const NoiseBatch& noise,
                                  double tol) {
  check_profile(game, alpha);
  check_noise(game, &noise);
  const double sz = std::sqrt(game.spec.bundle.c_z);
  const double fro = frobenius_scaled(game);
  if (sz > 0.0 && !(sz * fro < 1.0)) {
    throw ConditionViolation("finite aggregate map is not a contraction: √c_z·‖W‖_F = " + format_double(sz * fro) +
                             " ≥ 1");
  }
  const Eigen::MatrixXd scaledW = game.W / static_cast<double>(game.N);  // symmetric, so Z = X·(W/N)
  const auto S = noise.samples.rows();
  if (std::holds_alternative<IdentityDrift>(game.spec.drift)) {
    return (noise.samples.rowwise() + alpha.transpose()) * scaledW;
  }
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(S, game.N);
  Eigen::MatrixXd X(S, game.N);
  for (int it = 1; it <= 100000; ++it) {
    for (Eigen::Index s = 0; s < S; ++s)
      for (int j = 0; j < game.N; ++j) X(s, j) = drift_value(game.spec, alpha[j], Z(s, j)) + noise.samples(s, j);
    Eigen::MatrixXd next = X * scaledW;
    const double diff = (next - Z).cwiseAbs().maxCoeff();
    Z = std::move(next);
    if (!Z.allFinite()) throw NonConvergence("finite aggregate iteration produced non-finite values", it, diff);
    if (diff <= tol * std::max(1.0, Z.cwiseAbs().maxCoeff())) return Z;
  }
  throw NonConvergence("finite aggregate iteration hit the iteration cap", 100000, 0.0);
}

bool analytic_cost_available(const FiniteGame& game) {
  return std::holds_alternative<IdentityDrift>(game.spec.drift) &&
         std::holds_alternative<QuadraticCost>(game.spec.cost) && zero_diagonal(game);
}

CostEstimate expected_cost(const FiniteGame& game, int i, const Eigen::VectorXd& alpha, const NoiseBatch* noise,
                           CostMode mode) {
  check_profile(game, alpha);
  if (i < 0 || i >= game.N) throw ConfigError("player index out of range");
  if (use_analytic(game, mode)) return {analytic_cost(game, i, alpha[i], alpha), 0.0, true};
  check_noise(game, noise);
  const Eigen::VectorXd zcol = deviation_aggregate(game, i, alpha[i], alpha, *noise);
  const Eigen::VectorXd c = cost_samples(game, i, alpha[i], zcol, *noise);
  return {mean(c), std_error(c), false};
}

// ---------------------------------------------------------------------------
// Finite Nash

FiniteNashResult solve_nash_finite(const FiniteGame& game, const FiniteMethod& method, const NoiseBatch* noise) {
  const double wn = scaled_operator_norm(game);
  const Certificate cert = certify(game.spec, wn);
  const int N = game.N;

  if (std::holds_alternative<FiniteClosedForm>(method)) {
    if (!is_quadratic_identity(game.spec) || !zero_diagonal(game)) {
      throw ConfigError("closed-form finite Nash needs identity drift, quadratic cost and a zero diagonal");
    }
    const auto& q = std::get<QuadraticCost>(game.spec.cost);
    const Eigen::MatrixXd A = 2.0 * q.q2 * Eigen::MatrixXd::Identity(N, N) + (q.qz / N) * game.W;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (!(lu.rcond() > 1e-13)) throw ConditionViolation("finite Nash system is singular");
    Eigen::VectorXd alpha = lu.solve(Eigen::VectorXd::Constant(N, -q.q1));
    const double residual = (A * alpha + Eigen::VectorXd::Constant(N, q.q1)).cwiseAbs().maxCoeff();
    return {std::move(alpha), 1, residual, cert};
  }

  const auto& br = std::get<BestResponseIteration>(method);
  if (!(br.damping > 0.0 && br.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!cert.uniquenessOk && !br.overrideCondition) {
    throw ConditionViolation("finite uniqueness condition fails: value " + format_double(cert.uniquenessValue) +
                             " ≥ 1 with ‖W/N‖ = " + format_double(wn));
  }
  const bool analytic = analytic_cost_available(game) && std::holds_alternative<QuadraticCost>(game.spec.cost);
  if (!analytic) check_noise(game, noise);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= br.maxIter; ++it) {
    Eigen::VectorXd next(N);
    if (analytic) {
      // Deterministic reduction: the best response depends on z_i only through its mean.
      const Eigen::VectorXd zbar = (game.W * alpha) / N;
      for (int i = 0; i < N; ++i) next[i] = *analytic_best_response(game.spec, zbar[i]);
    } else {
      for (int i = 0; i < N; ++i) {
        const auto J = [&](double b) {
          return mean(cost_samples(game, i, b, deviation_aggregate(game, i, b, alpha, *noise), *noise));
        };
        double lo = alpha[i] - 10.0 * (1.0 + std::abs(alpha[i]));
        double hi = alpha[i] + 10.0 * (1.0 + std::abs(alpha[i]));
        if (game.spec.actions) {
          lo = game.spec.actions->lo;
          hi = game.spec.actions->hi;
        }
        next[i] = boost::math::tools::brent_find_minima(J, lo, hi, 50).first;
      }
    }
    if (br.damping < 1.0) next = (1.0 - br.damping) * alpha + br.damping * next;
    residual = (next - alpha).cwiseAbs().maxCoeff();
    alpha = std::move(next);
    if (!alpha.allFinite()) throw NonConvergence("finite best-response iteration diverged", it, residual);
    if (residual <= br.tol) return {std::move(alpha), it, residual, cert};
  }
  throw NonConvergence("finite best-response iteration hit the iteration cap", br.maxIter, residual);
}

// ---------------------------------------------------------------------------
// ε-Nash

EpsilonReport epsilon_nash_certify(const FiniteGame& game, const Eigen::VectorXd& alpha, const BetaGrid& grid,
                                   const NoiseBatch* noise, CostMode mode) {
  check_profile(game, alpha);
  if (grid.steps < 2 || !(grid.lo < grid.hi)) throw ConfigError("beta grid needs lo < hi and at least 2 steps");
  const bool analytic = use_analytic(game, mode);
  if (!analytic) check_noise(game, noise);

  EpsilonReport report{0.0, 0.0, 0, analytic};
  double worst = -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd zbar = (game.W * alpha) / game.N;
  for (int i = 0; i < game.N; ++i) {
    std::vector<double> candidates;
    candidates.reserve(grid.steps + 2);
    for (int k = 0; k < grid.steps; ++k) candidates.push_back(grid.lo + (grid.hi - grid.lo) * k / (grid.steps - 1));
    if (std::holds_alternative<QuadraticCost>(game.spec.cost)) {
      const double selfTerm = game.W(i, i) * alpha[i] / game.N;
      candidates.push_back(*analytic_best_response(game.spec, zbar[i] - selfTerm));
    }
    if (game.spec.actions) {
      for (auto& c : candidates) c = std::clamp(c, game.spec.actions->lo, game.spec.actions->hi);
    }

    double gap = 0.0;
    double gapError = 0.0;
    if (analytic) {
      const double base = analytic_cost(game, i, alpha[i], alpha);
      double best = base;
      for (double b : candidates) best = std::min(best, analytic_cost(game, i, b, alpha));
      gap = base - best;
    } else {
      const Eigen::VectorXd baseSamples =
          cost_samples(game, i, alpha[i], deviation_aggregate(game, i, alpha[i], alpha, *noise), *noise);
      const double base = mean(baseSamples);
      double best = base;
      Eigen::VectorXd bestSamples = baseSamples;
      for (double b : candidates) {
        Eigen::VectorXd s = cost_samples(game, i, b, deviation_aggregate(game, i, b, alpha, *noise), *noise);
        const double m = mean(s);
        if (m < best) {
          best = m;
          bestSamples = std::move(s);
        }
      }
      gap = base - best;
      gapError = std_error(baseSamples - bestSamples);
    }
    if (gap > worst) {
      worst = gap;
      report.worstPlayer = i;
      report.stdError = gapError;
    }
  }
  report.epsilon = worst;
  return report;
}

void write_alpha_csv(std::ostream& os, const Eigen::VectorXd& alpha) {
  os << "i,alpha\n";
  for (Eigen::Index i = 0; i < alpha.size(); ++i) os << i << ',' << format_double(alpha[i]) << '\n';
}

Eigen::VectorXd read_alpha_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || detail::trim(line) != "i,alpha") throw ConfigError("profile CSV must start with `i,alpha`");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, ',');
    if (cells.size() != 2) throw ConfigError("malformed row: " + line);
    values.push_back(detail::parse_number(cells[1]));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace graphon_games
