#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <variant>

namespace graphon_games {

/// Uniform midpoint grid on [0,1]: M cells of width 1/M, nodes x_i = (i + 1/2)/M.
class Grid {
 public:
  explicit Grid(int M);

  int size() const noexcept { return m_; }
  double cell_width() const noexcept { return 1.0 / m_; }
  double point(int i) const noexcept { return (i + 0.5) / m_; }
  Eigen::VectorXd points() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.m_ == b.m_; }

 private:
  int m_;
};

Grid make_grid(int M);

/// A function in L²(I) sampled at the midpoints of a Grid. Interpreted as the
/// step function that is constant on every cell.
class GridProfile {
 public:
  GridProfile(Grid grid, Eigen::VectorXd values);

  static GridProfile constant(const Grid& grid, double value);
  template <class F>
  static GridProfile from_function(const Grid& grid, F&& f) {
    Eigen::VectorXd v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.point(i));
    return GridProfile(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  int size() const noexcept { return grid_.size(); }
  double operator[](int i) const { return values_[i]; }

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

/// Midpoint rule: (1/M) Σ values.
double integrate(const GridProfile& p);
/// Quadrature with explicit per-node weights (used by operators with corrected weights).
double integrate(const GridProfile& p, const Eigen::VectorXd& weights);

double l2_norm(const GridProfile& p);
double l2_dist(const GridProfile& p, const GridProfile& q);
double sup_dist(const GridProfile& p, const GridProfile& q);

/// ψ^N: the step function taking value v_i on [(i-1)/N, i/N), sampled on M midpoints.
GridProfile embed_step(const Eigen::VectorXd& v, int M);

/// μ^N: block means over N equal blocks.
Eigen::VectorXd block_average(const GridProfile& p, int N);

struct IdentityRelabel {};
struct SortValues {};
struct ExhaustiveBlocks {
  int blocks;
};
using PermutationSearch = std::variant<IdentityRelabel, SortValues, ExhaustiveBlocks>;

/// Upper bound on the permutation-invariant L² distance d_S(p, q): the
/// minimum L² distance over the relabelings reachable by `search`.
double perm_invariant_dist(const GridProfile& p, const GridProfile& q, const PermutationSearch& search);

/// CSV with header `x,value`, 17 significant digits.
void write_profile_csv(std::ostream& os, const GridProfile& p);
GridProfile read_profile_csv(std::istream& is);

/// printf("%.17g") formatting for round-trip output.
std::string format_double(double v);

}  // namespace graphon_games
