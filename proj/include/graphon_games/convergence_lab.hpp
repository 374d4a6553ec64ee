#pragma once

#include "graphon_games/finite_game.hpp"
#include "graphon_games/function_space.hpp"
#include "graphon_games/game.hpp"
#include "graphon_games/graphon.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace graphon_games {

struct StudyConfig {
  Graphon graphon = Graphon::constant(0.5);
  GameSpec game = builtin_beach();
  std::vector<int> Nlist{50, 100, 200, 400, 800};
  SampleKind sampling = SampleKind::Bernoulli;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int gridM = 1600;
  PermutationSearch dsSearch = IdentityRelabel{};
  int cutResolution = 16;
  /// Noise draws for Monte Carlo paths (games without the deterministic reduction).
  int mcSamples = 2000;
};

void validate_study(const StudyConfig& cfg);

/// Multiple of N closest to M (ties go up; never below N).
int snap_grid(int M, int N);

/// Per-(N, seed) sampling seed, derived deterministically.
std::uint64_t row_seed(std::uint64_t seed, int N);

/// Absent quantities are NaN and are written as empty CSV cells.
struct RateRow {
  int N;
  std::uint64_t seed;
  double dS;
  double epsilon;
  double epsilonStdError;
  double opNorm;  ///< ‖W^N/N‖
  double cutLower;
  double cutUpper;
};

struct RateTable {
  std::vector<RateRow> rows;
  std::vector<int> Ns;           ///< distinct N values with at least one row
  std::vector<double> medians;   ///< median of the fitted quantity per N
  double fittedSlope = 0.0;      ///< least squares slope of log median vs log N
  std::vector<std::string> failures;
};

/// Median over rows with N, of dS (or epsilon when `epsilon` is set).
double median_for(const RateTable& t, int N, bool epsilon);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

RateTable run_convergence_study(const StudyConfig& cfg);
RateTable run_epsilon_study(const StudyConfig& cfg, const BetaGrid& grid, int S);

struct TheoreticalConstants {
  std::optional<double> kappa;  ///< absent when the stability bound is not computable
  double kappaTilde;
  double kappa0;
  double kappa1;
  double kappa2;
};

/// Throws ConditionViolation when the uniqueness value at ζ₂ + ε is not below 1.
TheoreticalConstants theoretical_constants(const GameSpec& spec, double zeta1, double zeta2, double eps, double c0);

struct StabilityRow {
  std::string label;
  double opNormDiff;
  double equilibriumDiff;
  double kappaBound;  ///< κ·‖𝐖 − 𝐖′‖
  double c0;
  bool ok;
  std::string error;
};

/// Relative slack allowed when comparing equilibriumDiff with kappaBound; the
/// bound is attained exactly for constant graphons.
inline constexpr double kStabilitySlack = 1e-9;

std::vector<StabilityRow> run_stability_study(const GameSpec& spec, const Graphon& w,
                                              const std::vector<Graphon>& perturbations, int gridM);

void write_rate_table_csv(std::ostream& os, const RateTable& t);
void write_stability_csv(std::ostream& os, const std::vector<StabilityRow>& rows);
nlohmann::json study_metadata(const StudyConfig& cfg, const RateTable& t, const std::string& study);

std::string to_string(const PermutationSearch& s);
PermutationSearch parse_permutation_search(const std::string& text);

}  // namespace graphon_games
