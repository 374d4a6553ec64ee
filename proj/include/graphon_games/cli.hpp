#pragma once

#include "graphon_games/convergence_lab.hpp"
#include "graphon_games/function_space.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace graphon_games::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kConditionViolation = 3,
  kNonConvergence = 4,
};

/// Fully resolved run configuration; every field is echoed into manifest.json.
struct RunConfig {
  std::string command;
  // game / graphon
  std::string game = "beach";
  std::string graphon = "constant:1";
  // numerics
  int gridM = 1024;
  double tol = 1e-12;
  int maxIter = 10000;
  double damping = 1.0;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int N = 100;
  std::vector<int> Nlist{50, 100, 200, 400, 800};
  std::string kind = "weighted";
  int mcSamples = 10000;
  int cutResolution = 16;
  std::string dsSearch = "identity";
  std::string study = "dS";  ///< converge: dS | epsilon
  // finite games
  std::string method = "closed-form";
  std::string graphFile;
  std::string alphaFile;
  std::string costMode = "auto";
  double betaLo = -2.0;
  double betaHi = 2.0;
  int betaSteps = 41;
  // stability
  std::vector<std::string> perturbations;
  // poa heatmap
  std::string heatmap;
  std::vector<double> thetaRange{0.01, 0.3, 30};
  std::vector<double> gammaRange{0.01, 0.3, 30};
  // output
  std::string outDir = "out";
  std::string format = "csv";
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Executes one command, writing results below cfg.outDir. Library exceptions
/// propagate; `main_entry` maps them to exit codes.
void run(const RunConfig& cfg, std::ostream& out);

/// Parses argv (CLI11), runs, and returns the process exit code.
int main_entry(int argc, char** argv);

// Plot data: whitespace-separated `.dat` files, one series per file.
void write_series_dat(const std::filesystem::path& path, const std::string& name, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y);
void write_profile_dat(const std::filesystem::path& path, const std::string& name, const GridProfile& p);
/// Row-major grid: first line holds the column axis, each row starts with its row-axis value; NaN marks gaps.
void write_heatmap_dat(const std::filesystem::path& path, const std::string& rowAxis, const std::string& colAxis,
                       const std::vector<double>& rows, const std::vector<double>& cols,
                       const std::vector<std::vector<double>>& values);
void write_rate_dat(const std::filesystem::path& path, const RateTable& t, bool epsilon);

}  // namespace graphon_games::cli
