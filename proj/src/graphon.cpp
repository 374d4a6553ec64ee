#include "graphon_games/graphon.hpp"

#include "graphon_games/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace graphon_games {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_symmetric(const Eigen::MatrixXd& W, const char* what) {
  if (W.rows() != W.cols() || W.rows() < 1) throw ConfigError(std::string(what) + " must be a non-empty square matrix");
  const double scale = 1.0 + W.cwiseAbs().maxCoeff();
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw ConfigError(std::string(what) + " must be symmetric");
  }
  if (!W.allFinite()) throw ConfigError(std::string(what) + " has non-finite entries");
}

void validate(const Graphon::Family& f) {
  std::visit(overloaded{
                 [](const family::Constant& c) {
                   if (!std::isfinite(c.a)) throw ConfigError("constant graphon value must be finite");
                 },
                 [](const family::StepMatrix& s) { check_symmetric(s.W, "step graphon matrix"); },
                 [](const family::PowerLaw& p) {
                   if (!(p.gamma > 0.0 && p.gamma < 1.0 / 3.0)) {
                     throw ConfigError("power-law exponent must lie in (0, 1/3), got " + format_double(p.gamma));
                   }
                 },
                 [](const family::NormalizedPowerLaw& p) {
                   if (!(p.gamma > 0.0 && p.gamma < 0.5)) {
                     throw ConfigError("normalized power-law exponent must lie in (0, 1/2), got " +
                                       format_double(p.gamma));
                   }
                   if (!std::isfinite(p.g)) throw ConfigError("normalized power-law scale must be finite");
                 },
                 [](const family::MinMax&) {},
                 [](const family::SimpleThreshold&) {},
                 [](const family::WattsStrogatz& w) {
                   if (!(w.p >= 0.0 && w.p <= 1.0 && w.rewire >= 0.0 && w.rewire <= 1.0)) {
                     throw ConfigError("Watts-Strogatz parameters must lie in [0,1]");
                   }
                 },
                 [](const family::CustomKernel& c) {
                   if (!c.kernel) throw ConfigError("custom kernel has no evaluator");
                 },
             },
             f);
}

double circle_distance(double x, double y) {
  const double d = std::abs(x - y);
  return std::min(d, 1.0 - d);
}

}  // namespace

Graphon::Graphon(Family f) : family_(std::move(f)) { validate(family_); }

Graphon Graphon::constant(double a) { return Graphon(family::Constant{a}); }
Graphon Graphon::step(Eigen::MatrixXd W) { return Graphon(family::StepMatrix{std::move(W)}); }
Graphon Graphon::power_law(double gamma) { return Graphon(family::PowerLaw{gamma}); }
Graphon Graphon::normalized_power_law(double gamma) {
  return Graphon(family::NormalizedPowerLaw{gamma, (1.0 - gamma) * (1.0 - gamma)});
}
Graphon Graphon::normalized_power_law(double gamma, double g) { return Graphon(family::NormalizedPowerLaw{gamma, g}); }
Graphon Graphon::min_max() { return Graphon(family::MinMax{}); }
Graphon Graphon::simple_threshold() { return Graphon(family::SimpleThreshold{}); }
Graphon Graphon::watts_strogatz(double p, double rewire) { return Graphon(family::WattsStrogatz{p, rewire}); }
Graphon Graphon::custom(std::function<double(double, double)> kernel, std::string label) {
  return Graphon(family::CustomKernel{std::move(kernel), std::move(label)});
}

double Graphon::eval(double x, double y) const {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw ConfigError("graphon coordinates must lie in [0,1], got (" + format_double(x) + ", " + format_double(y) + ")");
  }
  return std::visit(
      overloaded{
          [](const family::Constant& c) { return c.a; },
          [&](const family::StepMatrix& s) {
            const auto K = static_cast<int>(s.W.rows());
            const int i = std::min(static_cast<int>(std::floor(K * x)), K - 1);
            const int j = std::min(static_cast<int>(std::floor(K * y)), K - 1);
            return s.W(i, j);
          },
          [&](const family::PowerLaw& p) {
            if (x <= 0.0 || y <= 0.0) throw ConfigError("power-law graphon is singular at 0");
            return std::pow(x * y, -p.gamma);
          },
          [&](const family::NormalizedPowerLaw& p) {
            if (x <= 0.0 || y <= 0.0) throw ConfigError("power-law graphon is singular at 0");
            return p.g * std::pow(x * y, -p.gamma);
          },
          [&](const family::MinMax&) { return std::min(x, y) * (1.0 - std::max(x, y)); },
          [&](const family::SimpleThreshold&) { return x + y <= 1.0 ? 1.0 : 0.0; },
          [&](const family::WattsStrogatz& w) {
            return circle_distance(x, y) <= w.p / 2.0 ? 1.0 - w.rewire * (1.0 - w.p) : w.rewire * w.p;
          },
          [&](const family::CustomKernel& c) { return c.kernel(x, y); },
      },
      family_);
}

double Graphon::cell_value(int i, int j, int M) const {
  if (std::holds_alternative<family::SimpleThreshold>(family_)) {
    // Cell (i,j) has centre sum (i+j+1)/M; the line x+y=1 either misses the
    // cell or bisects it along its anti-diagonal.
    const int s = i + j + 1;
    if (s < M) return 1.0;
    if (s == M) return 0.5;
    return 0.0;
  }
  return eval((i + 0.5) / M, (j + 0.5) / M);
}

bool Graphon::unit_valued() const {
  return std::visit(overloaded{
                        [](const family::Constant& c) { return c.a >= 0.0 && c.a <= 1.0; },
                        [](const family::StepMatrix& s) { return s.W.minCoeff() >= 0.0 && s.W.maxCoeff() <= 1.0; },
                        [](const family::PowerLaw&) { return false; },
                        [](const family::NormalizedPowerLaw&) { return false; },
                        [](const family::MinMax&) { return true; },
                        [](const family::SimpleThreshold&) { return true; },
                        [](const family::WattsStrogatz&) { return true; },
                        [](const family::CustomKernel&) { return false; },
                    },
                    family_);
}

std::string Graphon::describe() const {
  return std::visit(overloaded{
                        [](const family::Constant& c) { return "constant:" + format_double(c.a); },
                        [](const family::StepMatrix& s) {
                          std::string out = "step:";
                          for (Eigen::Index i = 0; i < s.W.rows(); ++i) {
                            if (i) out += ';';
                            for (Eigen::Index j = 0; j < s.W.cols(); ++j) {
                              if (j) out += ',';
                              out += format_double(s.W(i, j));
                            }
                          }
                          return out;
                        },
                        [](const family::PowerLaw& p) { return "powerlaw:" + format_double(p.gamma); },
                        [](const family::NormalizedPowerLaw& p) {
                          return "normpowerlaw:" + format_double(p.gamma) + ",g=" + format_double(p.g);
                        },
                        [](const family::MinMax&) { return std::string("minmax"); },
                        [](const family::SimpleThreshold&) { return std::string("threshold"); },
                        [](const family::WattsStrogatz& w) {
                          return "wattsstrogatz:p=" + format_double(w.p) + ",rewire=" + format_double(w.rewire);
                        },
                        [](const family::CustomKernel& c) { return "custom:" + c.label; },
                    },
                    family_);
}

Graphon parse_graphon(const std::string& text) {
  const auto [name, rest] = detail::split_name(text);
  if (name == "step") {
    std::vector<std::vector<double>> rows;
    for (const auto& row : detail::split(rest, ';')) {
      std::vector<double> r;
      for (const auto& v : detail::split(row, ',')) r.push_back(detail::parse_number(v));
      rows.push_back(std::move(r));
    }
    const auto K = static_cast<Eigen::Index>(rows.size());
    if (K == 0) throw ConfigError("step graphon needs a matrix: step:a,b;c,d");
    Eigen::MatrixXd W(K, K);
    for (Eigen::Index i = 0; i < K; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != K) throw ConfigError("step graphon matrix must be square");
      for (Eigen::Index j = 0; j < K; ++j) W(i, j) = rows[i][j];
    }
    return step_graphon_from_matrix(W);
  }
  const detail::Params params(rest);
  if (name == "constant") return Graphon::constant(params.get("a", 0));
  if (name == "powerlaw") return Graphon::power_law(params.get("gamma", 0));
  if (name == "normpowerlaw") {
    const double gamma = params.get("gamma", 0);
    if (params.has("g")) return Graphon::normalized_power_law(gamma, params.get("g", -1));
    return Graphon::normalized_power_law(gamma);
  }
  if (name == "minmax") return Graphon::min_max();
  if (name == "threshold") return Graphon::simple_threshold();
  if (name == "wattsstrogatz") return Graphon::watts_strogatz(params.get("p", 0), params.get("rewire", 1));
  throw ConfigError("unknown graphon family `" + name + "`");
}

Graphon step_graphon_from_matrix(const Eigen::MatrixXd& W) {
  check_symmetric(W, "step graphon matrix");
  return Graphon::step(W);
}

// ---------------------------------------------------------------------------
// Discretization

DiscretizedOperator::DiscretizedOperator(Grid grid, Eigen::MatrixXd kernel, Eigen::VectorXd weights)
    : grid_(grid), kernel_(std::move(kernel)), weights_(std::move(weights)) {
  const int M = grid_.size();
  if (kernel_.rows() != M || kernel_.cols() != M) throw ConfigError("kernel shape does not match grid");
  if (weights_.size() != M) throw ConfigError("weight vector does not match grid");
  if ((weights_.array() <= 0.0).any()) throw ConfigError("quadrature weights must be positive");
  uniform_ = (weights_.array() == 1.0 / M).all();
}

Eigen::VectorXd DiscretizedOperator::apply(const Eigen::VectorXd& v) const {
  if (v.size() != grid_.size()) throw ConfigError("grid mismatch in operator application");
  if (uniform_) return kernel_ * v / grid_.size();
  return kernel_ * weights_.cwiseProduct(v);
}

GridProfile DiscretizedOperator::apply(const GridProfile& p) const {
  if (!(p.grid() == grid_)) throw ConfigError("grid mismatch in operator application");
  return GridProfile(grid_, apply(p.values()));
}

Eigen::MatrixXd DiscretizedOperator::symmetric_form() const {
  if (uniform_) return kernel_ / grid_.size();
  const Eigen::VectorXd s = weights_.cwiseSqrt();
  return s.asDiagonal() * kernel_ * s.asDiagonal();
}

Eigen::MatrixXd DiscretizedOperator::matrix() const {
  if (uniform_) return kernel_ / grid_.size();
  return kernel_ * weights_.asDiagonal();
}

Eigen::VectorXd DiscretizedOperator::row_integrals() const { return kernel_ * weights_; }

Eigen::VectorXd DiscretizedOperator::row_l2_norms() const {
  return (kernel_.array().square().matrix() * weights_).cwiseSqrt();
}

namespace {

// Least-norm correction of the first nodes so that 1, y^-γ and y^-2γ integrate exactly.
Eigen::VectorXd power_law_weights(int M, double gamma) {
  const double h = 1.0 / M;
  Eigen::VectorXd q = Eigen::VectorXd::Constant(M, h);
  const int m = std::min(M, 32);
  if (M < 8) return q;
  const double exps[3] = {0.0, gamma, 2.0 * gamma};
  Eigen::MatrixXd A(3, m);
  Eigen::Vector3d deficit;
  for (int r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (int j = M - 1; j >= 0; --j) sum += h * std::pow((j + 0.5) * h, -exps[r]);
    deficit[r] = 1.0 / (1.0 - exps[r]) - sum;
    for (int j = 0; j < m; ++j) A(r, j) = std::pow((j + 0.5) * h, -exps[r]);
  }
  const Eigen::VectorXd delta = A.completeOrthogonalDecomposition().solve(deficit);
  Eigen::VectorXd corrected = q;
  corrected.head(m) += delta;
  if ((corrected.array() <= 0.0).any()) return q;
  return corrected;
}

}  // namespace

DiscretizedOperator discretize(const Graphon& w, const Grid& grid) {
  const int M = grid.size();
  Eigen::MatrixXd A(M, M);
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(M, 1.0 / M);
  const auto& f = w.family();
  if (const auto* c = std::get_if<family::Constant>(&f)) {
    A.setConstant(c->a);
  } else if (std::holds_alternative<family::PowerLaw>(f) || std::holds_alternative<family::NormalizedPowerLaw>(f)) {
    double gamma = 0.0;
    double g = 1.0;
    if (const auto* p = std::get_if<family::PowerLaw>(&f)) {
      gamma = p->gamma;
    } else {
      const auto& np = std::get<family::NormalizedPowerLaw>(f);
      gamma = np.gamma;
      g = np.g;
    }
    Eigen::VectorXd u(M);
    for (int i = 0; i < M; ++i) u[i] = std::pow(grid.point(i), -gamma);
    A = g * u * u.transpose();
    weights = power_law_weights(M, gamma);
  } else {
    for (int i = 0; i < M; ++i) {
      for (int j = i; j < M; ++j) {
        const double v = w.cell_value(i, j, M);
        A(i, j) = v;
        A(j, i) = v;
      }
    }
  }
  return DiscretizedOperator(grid, std::move(A), std::move(weights));
}

// ---------------------------------------------------------------------------
// Norms

namespace {

Eigen::VectorXd start_vector(Eigen::Index n) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v.normalized();
}

template <class Apply>
NormEstimate power_iteration(Eigen::Index n, Apply&& apply, double tol, int maxIter) {
  if (!(tol > 0.0)) throw ConfigError("power iteration tolerance must be positive");
  Eigen::VectorXd v = start_vector(n);
  double lambda = 0.0;
  for (int k = 1; k <= maxIter; ++k) {
    Eigen::VectorXd w = apply(v);
    const double next = w.norm();
    if (next == 0.0) return {0.0, k, true};
    v = w / next;
    // ‖S v‖ converges to max |λ| even when ±λ share the top magnitude.
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) return {next, k, true};
    lambda = next;
  }
  return {lambda, maxIter, false};
}

}  // namespace

NormEstimate symmetric_matrix_norm(const Eigen::MatrixXd& S, double tol, int maxIter) {
  return power_iteration(
      S.rows(), [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(S * v); }, tol, maxIter);
}

NormEstimate operator_norm(const DiscretizedOperator& op, double tol, int maxIter) {
  return symmetric_matrix_norm(op.symmetric_form(), tol, maxIter);
}

NormEstimate operator_norm_difference(const DiscretizedOperator& a, const DiscretizedOperator& b, double tol,
                                      int maxIter) {
  if (!(a.grid() == b.grid())) throw ConfigError("operator difference needs a common grid");
  if (a.weights() == b.weights() && a.uniform_weights()) {
    return symmetric_matrix_norm(a.symmetric_form() - b.symmetric_form(), tol, maxIter);
  }
  const Eigen::MatrixXd B = a.matrix() - b.matrix();
  const Eigen::MatrixXd BtB = B.transpose() * B;
  NormEstimate est = symmetric_matrix_norm(BtB, tol * tol, maxIter);
  est.value = std::sqrt(est.value);
  return est;
}

double hs_norm(const DiscretizedOperator& op) { return op.symmetric_form().norm(); }

double hs_norm(const Graphon& w, const Grid& grid) { return hs_norm(discretize(w, grid)); }

// ---------------------------------------------------------------------------
// Resolvent

GridProfile resolvent_apply(const DiscretizedOperator& op, double theta, const GridProfile& phi,
                            const ResolventMethod& method) {
  if (!(phi.grid() == op.grid())) throw ConfigError("grid mismatch in resolvent");
  if (theta == 0.0) return phi;
  if (const auto* neumann = std::get_if<NeumannSeries>(&method)) {
    const double norm = operator_norm(op).value;
    if (!(std::abs(theta) * norm < 1.0)) {
      throw ConditionViolation("Neumann series needs |θ|·‖W‖ < 1, got " + format_double(std::abs(theta) * norm));
    }
    Eigen::VectorXd term = phi.values();
    Eigen::VectorXd sum = term;
    const double scale = std::sqrt(phi.values().squaredNorm() / phi.size());
    for (int n = 1; n <= neumann->maxTerms; ++n) {
      term = theta * op.apply(term);
      sum += term;
      if (std::sqrt(term.squaredNorm() / phi.size()) <= neumann->tol * std::max(1.0, scale)) {
        return GridProfile(op.grid(), std::move(sum));
      }
    }
    throw NonConvergence("Neumann series did not reach tolerance", neumann->maxTerms,
                         std::sqrt(term.squaredNorm() / phi.size()));
  }
  const int M = op.grid().size();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(M, M) - theta * op.matrix();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (!(lu.rcond() > 1e-13)) {
    throw ConditionViolation("I − θW is singular to working precision (θ = " + format_double(theta) + ")");
  }
  return GridProfile(op.grid(), lu.solve(phi.values()));
}

// ---------------------------------------------------------------------------
// Spectrum

namespace {

struct RawEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

RawEigen sort_by_magnitude(const Eigen::VectorXd& vals, const Eigen::MatrixXd& vecs, int k) {
  std::vector<int> order(vals.size());
  for (int i = 0; i < vals.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(vals[a]) > std::abs(vals[b]); });
  RawEigen out{Eigen::VectorXd(k), Eigen::MatrixXd(vecs.rows(), k)};
  for (int i = 0; i < k; ++i) {
    out.values[i] = vals[order[i]];
    out.vectors.col(i) = vecs.col(order[i]);
  }
  return out;
}

// Block subspace iteration with Rayleigh–Ritz; converges to the eigenvalues of largest magnitude.
RawEigen subspace_iteration(const Eigen::MatrixXd& S, int k) {
  const auto M = static_cast<int>(S.rows());
  const int p = std::min(M, k + 10);
  std::mt19937_64 rng(0xe16e);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(M, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < M; ++i) X(i, j) = normal(rng);
  X = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ() * Eigen::MatrixXd::Identity(M, p);
  const double scale = std::max(1e-300, S.norm());
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(k);
  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::MatrixXd Y = S * X;
    const Eigen::MatrixXd H = X.transpose() * Y;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 * (H + H.transpose()));
    RawEigen ritz = sort_by_magnitude(small.eigenvalues(), small.eigenvectors(), p);
    const Eigen::MatrixXd V = X * ritz.vectors;
    const Eigen::MatrixXd SV = Y * ritz.vectors;
    double residual = 0.0;
    for (int j = 0; j < k; ++j) residual = std::max(residual, (SV.col(j) - ritz.values[j] * V.col(j)).norm());
    const Eigen::VectorXd top = ritz.values.head(k);
    if (residual <= 1e-11 * scale && (top - previous).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
      return {top, V.leftCols(k)};
    }
    previous = top;
    X = Eigen::HouseholderQR<Eigen::MatrixXd>(SV).householderQ() * Eigen::MatrixXd::Identity(M, p);
  }
  throw NonConvergence("subspace iteration did not converge", 20000, 0.0);
}

}  // namespace

EigenPairs eigen_decompose(const DiscretizedOperator& op, int k) {
  const int M = op.grid().size();
  if (k < 1 || k > M) throw ConfigError("eigen_decompose needs 1 <= k <= M");
  const Eigen::MatrixXd S = op.symmetric_form();
  RawEigen raw;
  if (M <= 768 || k + 10 >= M) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    raw = sort_by_magnitude(solver.eigenvalues(), solver.eigenvectors(), k);
  } else {
    raw = subspace_iteration(S, k);
  }
  EigenPairs out;
  out.values = raw.values;
  const Eigen::VectorXd inv_sqrt_w = op.weights().cwiseSqrt().cwiseInverse();
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd phi = inv_sqrt_w.cwiseProduct(raw.vectors.col(j));
    const double mass = phi.dot(op.weights());
    Eigen::Index arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    if (mass < -1e-12 || (std::abs(mass) <= 1e-12 && phi[arg] < 0.0)) phi = -phi;
    out.profiles.emplace_back(op.grid(), std::move(phi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::string to_string(SampleKind kind) { return kind == SampleKind::Weighted ? "weighted" : "bernoulli"; }

SampleKind parse_sample_kind(const std::string& text) {
  if (text == "weighted") return SampleKind::Weighted;
  if (text == "bernoulli") return SampleKind::Bernoulli;
  throw ConfigError("unknown sampling kind `" + text + "` (expected weighted | bernoulli)");
}

namespace {

Eigen::VectorXd sorted_latent_points(int N, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(N);
  for (int i = 0; i < N; ++i) {
    double v = u(rng);
    while (v <= 0.0) v = u(rng);
    x[i] = v;
  }
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace

SampledGraph sample_weighted(const Graphon& w, int N, std::uint64_t seed) {
  if (N < 1) throw ConfigError("sample size must be positive");
  std::mt19937_64 rng(seed);
  SampledGraph g{N, Eigen::MatrixXd::Zero(N, N), SampleKind::Weighted, sorted_latent_points(N, rng)};
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double v = w.eval(g.latent[i], g.latent[j]);
      g.W(i, j) = v;
      g.W(j, i) = v;
    }
  }
  return g;
}

SampledGraph sample_bernoulli(const Graphon& w, int N, std::uint64_t seed) {
  if (N < 1) throw ConfigError("sample size must be positive");
  const bool known_unit = w.unit_valued();
  if (!known_unit && !std::holds_alternative<family::CustomKernel>(w.family())) {
    throw ConfigError("Bernoulli sampling needs a [0,1]-valued graphon; " + w.describe() + " is not");
  }
  std::mt19937_64 rng(seed);
  SampledGraph g{N, Eigen::MatrixXd::Zero(N, N), SampleKind::Bernoulli, sorted_latent_points(N, rng)};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double p = w.eval(g.latent[i], g.latent[j]);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("Bernoulli sampling hit kernel value " + format_double(p) + " outside [0,1]");
      }
      const double v = u(rng) < p ? 1.0 : 0.0;
      g.W(i, j) = v;
      g.W(j, i) = v;
    }
  }
  return g;
}

SampledGraph sample_graph(const Graphon& w, int N, SampleKind kind, std::uint64_t seed) {
  return kind == SampleKind::Weighted ? sample_weighted(w, N, seed) : sample_bernoulli(w, N, seed);
}

void write_sampled_graph_csv(std::ostream& os, const SampledGraph& g) {
  os << "#kind," << to_string(g.kind) << '\n';
  os << "#latent";
  for (int i = 0; i < g.N; ++i) os << ',' << format_double(g.latent[i]);
  os << "\ni,j,w\n";
  for (int i = 0; i < g.N; ++i) {
    for (int j = i + 1; j < g.N; ++j) {
      if (g.W(i, j) != 0.0) os << i << ',' << j << ',' << format_double(g.W(i, j)) << '\n';
    }
  }
}

SampledGraph read_sampled_graph_csv(std::istream& is) {
  std::string line;
  SampleKind kind = SampleKind::Weighted;
  std::vector<double> latent;
  bool header = false;
  std::vector<std::tuple<int, int, double>> edges;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("#kind,", 0) == 0) {
      kind = parse_sample_kind(line.substr(6));
    } else if (line.rfind("#latent", 0) == 0) {
      for (const auto& v : detail::split(line.substr(7), ',')) {
        if (!v.empty()) latent.push_back(detail::parse_number(v));
      }
    } else if (line[0] == '#') {
      continue;
    } else if (!header) {
      if (line != "i,j,w") throw ConfigError("sampled graph CSV must have header `i,j,w`");
      header = true;
    } else {
      const auto cells = detail::split(line, ',');
      if (cells.size() != 3) throw ConfigError("malformed edge row: " + line);
      edges.emplace_back(std::stoi(cells[0]), std::stoi(cells[1]), detail::parse_number(cells[2]));
    }
  }
  const auto N = static_cast<int>(latent.size());
  if (N < 1) throw ConfigError("sampled graph CSV lacks the #latent line");
  SampledGraph g{N, Eigen::MatrixXd::Zero(N, N), kind,
                 Eigen::Map<Eigen::VectorXd>(latent.data(), static_cast<Eigen::Index>(N))};
  for (const auto& [i, j, w] : edges) {
    if (i < 0 || j < 0 || i >= N || j >= N || i == j) throw ConfigError("edge index out of range");
    g.W(i, j) = w;
    g.W(j, i) = w;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Cut norm

CutNormBounds cut_norm_bounds(const Graphon& w1, const Graphon& w2, const Grid& grid, int scanResolution) {
  if (scanResolution < 2) throw ConfigError("cut-norm scan resolution must be at least 2");
  const int M = grid.size();
  const double h2 = 1.0 / (static_cast<double>(M) * M);
  // prefix(i, j) = Σ_{a<i, b<j} D(a,b)/M².
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(M + 1, M + 1);
  double sq = 0.0;
  for (int i = 0; i < M; ++i) {
    double row = 0.0;
    for (int j = 0; j < M; ++j) {
      const double d = w1.cell_value(i, j, M) - w2.cell_value(i, j, M);
      sq += d * d * h2;
      row += d * h2;
      prefix(i + 1, j + 1) = prefix(i, j + 1) + row;
    }
  }
  const int R = std::min(scanResolution, M);
  std::vector<int> cut(R + 1);
  for (int a = 0; a <= R; ++a) cut[a] = static_cast<int>(std::lround(static_cast<double>(a) * M / R));
  double lower = 0.0;
  for (int s1 = 0; s1 < R; ++s1) {
    for (int s2 = s1 + 1; s2 <= R; ++s2) {
      for (int t1 = 0; t1 < R; ++t1) {
        for (int t2 = t1 + 1; t2 <= R; ++t2) {
          const double v = prefix(cut[s2], cut[t2]) - prefix(cut[s1], cut[t2]) - prefix(cut[s2], cut[t1]) +
                           prefix(cut[s1], cut[t1]);
          lower = std::max(lower, std::abs(v));
        }
      }
    }
  }
  const double upper = std::sqrt(sq);
  return {std::min(lower, upper), upper};
}

}  // namespace graphon_games
