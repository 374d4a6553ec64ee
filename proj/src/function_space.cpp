#include "graphon_games/function_space.hpp"

#include "graphon_games/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

namespace graphon_games {

Grid::Grid(int M) : m_(M) {
  if (M < 1) throw ConfigError("grid size must be positive, got " + std::to_string(M));
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd x(m_);
  for (int i = 0; i < m_; ++i) x[i] = point(i);
  return x;
}

Grid make_grid(int M) { return Grid(M); }

GridProfile::GridProfile(Grid grid, Eigen::VectorXd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ConfigError("profile length " + std::to_string(values_.size()) + " does not match grid size " +
                      std::to_string(grid_.size()));
  }
  if (!values_.allFinite()) throw ConfigError("profile contains non-finite values");
}

GridProfile GridProfile::constant(const Grid& grid, double value) {
  return GridProfile(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

namespace {

void require_same_grid(const GridProfile& p, const GridProfile& q) {
  if (!(p.grid() == q.grid())) {
    throw ConfigError("grid mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
  }
}

}  // namespace

double integrate(const GridProfile& p) { return p.values().sum() / p.size(); }

double integrate(const GridProfile& p, const Eigen::VectorXd& weights) {
  if (weights.size() != p.size()) throw ConfigError("quadrature weight length mismatch");
  return p.values().dot(weights);
}

double l2_norm(const GridProfile& p) { return std::sqrt(p.values().squaredNorm() / p.size()); }

double l2_dist(const GridProfile& p, const GridProfile& q) {
  require_same_grid(p, q);
  return std::sqrt((p.values() - q.values()).squaredNorm() / p.size());
}

double sup_dist(const GridProfile& p, const GridProfile& q) {
  require_same_grid(p, q);
  return (p.values() - q.values()).cwiseAbs().maxCoeff();
}

GridProfile embed_step(const Eigen::VectorXd& v, int M) {
  const auto N = static_cast<int>(v.size());
  if (N < 1 || M < 1 || M % N != 0) {
    throw ConfigError("embed_step needs M to be a positive multiple of N (M=" + std::to_string(M) +
                      ", N=" + std::to_string(N) + ")");
  }
  const int width = M / N;
  Eigen::VectorXd out(M);
  for (int b = 0; b < N; ++b) out.segment(b * width, width).setConstant(v[b]);
  return GridProfile(Grid(M), std::move(out));
}

Eigen::VectorXd block_average(const GridProfile& p, int N) {
  const int M = p.size();
  if (N < 1 || M % N != 0) {
    throw ConfigError("block_average needs M to be a multiple of N (M=" + std::to_string(M) +
                      ", N=" + std::to_string(N) + ")");
  }
  const int width = M / N;
  Eigen::VectorXd out(N);
  for (int b = 0; b < N; ++b) out[b] = p.values().segment(b * width, width).mean();
  return out;
}

namespace {

Eigen::VectorXd block_values_checked(const GridProfile& p, int K) {
  if (p.size() % K != 0) throw ConfigError("profile is not block-constant with the declared block count");
  const int width = p.size() / K;
  Eigen::VectorXd blocks(K);
  for (int b = 0; b < K; ++b) {
    auto seg = p.values().segment(b * width, width);
    const double v = seg[0];
    const double scale = 1.0 + std::abs(v);
    if ((seg.array() - v).abs().maxCoeff() > 1e-12 * scale) {
      throw ConfigError("profile is not block-constant with " + std::to_string(K) + " blocks");
    }
    blocks[b] = v;
  }
  return blocks;
}

}  // namespace

double perm_invariant_dist(const GridProfile& p, const GridProfile& q, const PermutationSearch& search) {
  require_same_grid(p, q);
  if (std::holds_alternative<IdentityRelabel>(search)) return l2_dist(p, q);

  if (std::holds_alternative<SortValues>(search)) {
    // Sorting permutes equal-measure cells, which is a measure-preserving relabeling;
    // by the rearrangement inequality it is optimal among cell permutations.
    Eigen::VectorXd a = p.values();
    Eigen::VectorXd b = q.values();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::sqrt((a - b).squaredNorm() / p.size());
  }

  const int K = std::get<ExhaustiveBlocks>(search).blocks;
  if (K < 1 || K > 9) throw ConfigError("ExhaustiveBlocks supports 1..9 blocks, got " + std::to_string(K));
  const Eigen::VectorXd a = block_values_checked(p, K);
  const Eigen::VectorXd b = block_values_checked(q, K);
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < K; ++i) s += (a[i] - b[perm[i]]) * (a[i] - b[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / K);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_profile_csv(std::ostream& os, const GridProfile& p) {
  os << "x,value\n";
  for (int i = 0; i < p.size(); ++i) {
    os << format_double(p.grid().point(i)) << ',' << format_double(p[i]) << '\n';
  }
}

GridProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,value", 0) != 0) throw ConfigError("profile CSV must start with `x,value`");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed profile CSV row: " + line);
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (values.empty()) throw ConfigError("profile CSV has no rows");
  return GridProfile(Grid(static_cast<int>(values.size())),
                     Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

}  // namespace graphon_games
