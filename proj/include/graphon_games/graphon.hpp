#pragma once

#include "graphon_games/function_space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace graphon_games {

namespace family {

struct Constant {
  double a;
};
/// Ψ^K(W): value W(i,j) on [(i-1)/K, i/K) × [(j-1)/K, j/K).
struct StepMatrix {
  Eigen::MatrixXd W;
};
/// (xy)^(-gamma), gamma in (0, 1/3).
struct PowerLaw {
  double gamma;
};
/// g·(xy)^(-gamma), gamma in (0, 1/2).
struct NormalizedPowerLaw {
  double gamma;
  double g;
};
/// min(x,y)(1 - max(x,y)).
struct MinMax {};
/// 1{x + y <= 1}.
struct SimpleThreshold {};
/// Ring lattice of width p with rewiring probability `rewire`, in the circle metric.
struct WattsStrogatz {
  double p;
  double rewire;
};
/// Caller-supplied symmetric square-integrable kernel.
struct CustomKernel {
  std::function<double(double, double)> kernel;
  std::string label;
};

}  // namespace family

class Graphon {
 public:
  using Family = std::variant<family::Constant, family::StepMatrix, family::PowerLaw, family::NormalizedPowerLaw,
                              family::MinMax, family::SimpleThreshold, family::WattsStrogatz, family::CustomKernel>;

  explicit Graphon(Family f);

  static Graphon constant(double a);
  static Graphon step(Eigen::MatrixXd W);
  static Graphon power_law(double gamma);
  /// Default normalization g = (1 - gamma)² gives unit average connection strength.
  static Graphon normalized_power_law(double gamma);
  static Graphon normalized_power_law(double gamma, double g);
  static Graphon min_max();
  static Graphon simple_threshold();
  static Graphon watts_strogatz(double p, double rewire);
  static Graphon custom(std::function<double(double, double)> kernel, std::string label = "custom");

  const Family& family() const noexcept { return family_; }

  /// Kernel value; coordinates must lie in [0,1] (and be positive for power laws).
  double eval(double x, double y) const;

  /// Entry of the discretized kernel for cell pair (i, j) of an M-cell grid.
  /// Midpoint value for most families; the exact cell average for the
  /// threshold kernel, whose discontinuity runs through cell centres.
  double cell_value(int i, int j, int M) const;

  /// True when every kernel value is known to lie in [0,1].
  bool unit_valued() const;

  /// Canonical text form, e.g. `constant:0.5`, `powerlaw:0.2`; parsed by parse_graphon.
  std::string describe() const;

 private:
  Family family_;
};

/// Parses `constant:A`, `powerlaw:G`, `normpowerlaw:G[,g=S]`, `minmax`, `threshold`,
/// `wattsstrogatz:p=P,rewire=R`, `step:a,b;c,d` (rows separated by ';').
Graphon parse_graphon(const std::string& text);

/// Ψ^K; rejects asymmetric input.
Graphon step_graphon_from_matrix(const Eigen::MatrixXd& W);

/// Nyström discretization of the graphon operator: [W p]_i = Σ_j kernel(i,j)·weights(j)·p_j.
/// Weights are 1/M except for power-law kernels, whose first nodes carry a
/// correction that integrates 1, y^-γ and y^-2γ exactly.
class DiscretizedOperator {
 public:
  DiscretizedOperator(Grid grid, Eigen::MatrixXd kernel, Eigen::VectorXd weights);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  bool uniform_weights() const noexcept { return uniform_; }

  GridProfile apply(const GridProfile& p) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  /// Q^{1/2} A Q^{1/2}; shares its spectrum with the operator.
  Eigen::MatrixXd symmetric_form() const;
  /// The operator as a plain matrix, A·diag(q).
  Eigen::MatrixXd matrix() const;

  /// ∫ w(x_i, y) dy for every node.
  Eigen::VectorXd row_integrals() const;
  /// (∫ w(x_i, y)² dy)^{1/2} for every node.
  Eigen::VectorXd row_l2_norms() const;

 private:
  Grid grid_;
  Eigen::MatrixXd kernel_;
  Eigen::VectorXd weights_;
  bool uniform_;
};

DiscretizedOperator discretize(const Graphon& w, const Grid& grid);

struct NormEstimate {
  double value;
  int iterations;
  bool converged;
};

/// Largest |λ| of the discretized operator by power iteration; stops when
/// successive estimates differ by at most tol.
NormEstimate operator_norm(const DiscretizedOperator& op, double tol = 1e-13, int maxIter = 100000);

/// Spectral norm of a symmetric matrix by the same power iteration.
NormEstimate symmetric_matrix_norm(const Eigen::MatrixXd& S, double tol = 1e-13, int maxIter = 100000);

/// ‖𝐖 − 𝐖′‖ on L²(grid) for two operators on the same grid (largest singular value).
NormEstimate operator_norm_difference(const DiscretizedOperator& a, const DiscretizedOperator& b,
                                      double tol = 1e-13, int maxIter = 100000);

/// (∫∫ w²)^{1/2} with the discretization's quadrature.
double hs_norm(const Graphon& w, const Grid& grid);
double hs_norm(const DiscretizedOperator& op);

struct NeumannSeries {
  double tol = 1e-14;
  int maxTerms = 100000;
};
struct DirectSolve {};
using ResolventMethod = std::variant<NeumannSeries, DirectSolve>;

/// r = [I − θ𝐖]^{-1} φ.
GridProfile resolvent_apply(const DiscretizedOperator& op, double theta, const GridProfile& phi,
                            const ResolventMethod& method = DirectSolve{});

struct EigenPairs {
  Eigen::VectorXd values;             ///< sorted by decreasing |λ|
  std::vector<GridProfile> profiles;  ///< orthonormal in the operator's quadrature inner product
};

/// Top-k eigenpairs by magnitude.
EigenPairs eigen_decompose(const DiscretizedOperator& op, int k);

enum class SampleKind { Weighted, Bernoulli };

std::string to_string(SampleKind kind);
SampleKind parse_sample_kind(const std::string& text);

struct SampledGraph {
  int N;
  Eigen::MatrixXd W;        ///< symmetric, zero diagonal
  SampleKind kind;
  Eigen::VectorXd latent;  ///< sorted ascending
};

SampledGraph sample_weighted(const Graphon& w, int N, std::uint64_t seed);
SampledGraph sample_bernoulli(const Graphon& w, int N, std::uint64_t seed);
SampledGraph sample_graph(const Graphon& w, int N, SampleKind kind, std::uint64_t seed);

/// Leading `#kind,...` and `#latent,...` lines, then `i,j,w` for every i<j with w != 0.
void write_sampled_graph_csv(std::ostream& os, const SampledGraph& g);
SampledGraph read_sampled_graph_csv(std::istream& is);

struct CutNormBounds {
  double lower;
  double upper;
};

/// Bounds on ‖w1 − w2‖_□: interval-rectangle scan from below, ‖w1 − w2‖₂ from above.
CutNormBounds cut_norm_bounds(const Graphon& w1, const Graphon& w2, const Grid& grid, int scanResolution);

}  // namespace graphon_games
