#include "graphon_games/convergence_lab.hpp"

#include "graphon_games/errors.hpp"
#include "graphon_games/graphon_equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace graphon_games {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void validate_study(const StudyConfig& cfg) {
  if (cfg.Nlist.empty()) throw ConfigError("Nlist must not be empty");
  for (std::size_t k = 0; k < cfg.Nlist.size(); ++k) {
    if (cfg.Nlist[k] < 1) throw ConfigError("Nlist entries must be positive");
    if (k > 0 && cfg.Nlist[k] <= cfg.Nlist[k - 1]) throw ConfigError("Nlist must be strictly increasing");
  }
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
  if (cfg.gridM < 1) throw ConfigError("gridM must be positive");
  if (cfg.cutResolution < 2) throw ConfigError("cut-norm scan resolution must be at least 2");
  if (cfg.mcSamples < 1) throw ConfigError("mcSamples must be positive");
  validate_spec(cfg.game);
}

int snap_grid(int M, int N) {
  if (N < 1 || M < 1) throw ConfigError("snap_grid needs positive sizes");
  const int lower = (M / N) * N;
  const int upper = lower + N;
  if (lower < N) return N;
  return (M - lower < upper - M) ? lower : upper;
}

std::uint64_t row_seed(std::uint64_t seed, int N) {
  // splitmix64 finalizer over (seed, N)
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(N);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double median_for(const RateTable& t, int N, bool epsilon) {
  std::vector<double> v;
  for (const auto& r : t.rows) {
    const double x = epsilon ? r.epsilon : r.dS;
    if (r.N == N && !std::isnan(x)) v.push_back(x);
  }
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  double mx = 0, my = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

class GraphonNashCache {
 public:
  GraphonNashCache(const StudyConfig& cfg) : cfg_(cfg) {}

  const GridProfile& at(int M) {
    auto it = cache_.find(M);
    if (it != cache_.end()) return it->second;
    const DiscretizedOperator op = discretize(cfg_.graphon, Grid(M));
    NashOptions opts;
    opts.tol = 1e-13;
    const EquilibriumReport r = solve_nash(cfg_.game, op, opts);
    if (!r.certificate.uniquenessOk) {
      throw ConditionViolation("study needs a unique graphon equilibrium; uniqueness value " +
                               format_double(r.certificate.uniquenessValue));
    }
    if (!r.converged) throw NonConvergence("graphon Nash did not converge", r.iterations, r.residual);
    return cache_.emplace(M, r.profile).first->second;
  }

 private:
  const StudyConfig& cfg_;
  std::map<int, GridProfile> cache_;
};

Eigen::VectorXd finite_equilibrium(const FiniteGame& game, const StudyConfig& cfg, std::uint64_t seed) {
  if (is_quadratic_identity(game.spec) && analytic_cost_available(game)) {
    return solve_nash_finite(game, FiniteClosedForm{}).alpha;
  }
  const NoiseBatch noise = draw_noise(game.spec.noise, cfg.mcSamples, game.N, seed ^ 0x5a5a5a5aULL);
  BestResponseIteration br;
  br.tol = 1e-10;
  return solve_nash_finite(game, br, &noise).alpha;
}

void finish(RateTable& t, const StudyConfig& cfg, bool epsilon) {
  std::vector<double> ns;
  std::vector<double> ys;
  for (int N : cfg.Nlist) {
    const double m = median_for(t, N, epsilon);
    if (std::isnan(m)) continue;
    t.Ns.push_back(N);
    t.medians.push_back(m);
    if (m > 0.0) {
      ns.push_back(N);
      ys.push_back(m);
    }
  }
  t.fittedSlope = loglog_slope(ns, ys);
}

}  // namespace

RateTable run_convergence_study(const StudyConfig& cfg) {
  validate_study(cfg);
  GraphonNashCache nash(cfg);
  RateTable table;
  for (int N : cfg.Nlist) {
    const int M = snap_grid(cfg.gridM, N);
    for (std::uint64_t seed : cfg.seeds) {
      try {
        const GridProfile& target = nash.at(M);
        const SampledGraph g = sample_graph(cfg.graphon, N, cfg.sampling, row_seed(seed, N));
        const FiniteGame game = finite_game_from_sample(g, cfg.game);
        const Eigen::VectorXd alpha = finite_equilibrium(game, cfg, row_seed(seed, N));
        const double dS = perm_invariant_dist(embed_step(alpha, M), target, cfg.dsSearch);
        const CutNormBounds cut =
            cut_norm_bounds(Graphon::step(g.W), cfg.graphon, Grid(M), cfg.cutResolution);
        table.rows.push_back({N, seed, dS, kNaN, kNaN, scaled_operator_norm(game), cut.lower, cut.upper});
      } catch (const std::exception& e) {
        table.failures.push_back("N=" + std::to_string(N) + " seed=" + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  finish(table, cfg, false);
  return table;
}

RateTable run_epsilon_study(const StudyConfig& cfg, const BetaGrid& grid, int S) {
  validate_study(cfg);
  if (S < 1) throw ConfigError("S must be positive");
  GraphonNashCache nash(cfg);
  RateTable table;
  for (int N : cfg.Nlist) {
    const int M = snap_grid(cfg.gridM, N);
    for (std::uint64_t seed : cfg.seeds) {
      try {
        const GridProfile& target = nash.at(M);
        const SampledGraph g = sample_graph(cfg.graphon, N, cfg.sampling, row_seed(seed, N));
        const FiniteGame game = finite_game_from_sample(g, cfg.game);
        const Eigen::VectorXd alpha = block_average(target, N);
        std::optional<NoiseBatch> noise;
        if (!analytic_cost_available(game)) noise = draw_noise(game.spec.noise, S, N, row_seed(seed, N) ^ 0xa5a5ULL);
        const EpsilonReport eps = epsilon_nash_certify(game, alpha, grid, noise ? &*noise : nullptr);
        const double dS = perm_invariant_dist(embed_step(alpha, M), target, cfg.dsSearch);
        table.rows.push_back({N, seed, dS, eps.epsilon, eps.stdError, scaled_operator_norm(game), kNaN, kNaN});
      } catch (const std::exception& e) {
        table.failures.push_back("N=" + std::to_string(N) + " seed=" + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  finish(table, cfg, true);
  return table;
}

TheoreticalConstants theoretical_constants(const GameSpec& spec, double zeta1, double zeta2, double eps, double c0) {
  const auto& k = spec.bundle;
  const double z1 = zeta1 + eps;
  const double z2 = zeta2 + eps;
  const double noiseVar = spec.noise.variance();
  const double d0 = 1.0 - 2.0 * k.c_z * z1 * z1;
  const double dz = 1.0 - std::sqrt(k.c_z) * z2;
  if (!(d0 > 0.0) || !(dz > 0.0)) throw ConditionViolation("rate constants need 1 − 2c_z(ζ₁+ε)² > 0 and 1 − √c_z(ζ₂+ε) > 0");
  const double u = (k.ell_J / k.ell_c) * std::sqrt(k.c_alpha) * z2 / dz;
  if (!(u < 1.0)) throw ConditionViolation("rate constants need the uniqueness value at ζ₂+ε below 1, got " + format_double(u));
  TheoreticalConstants out;
  out.kappa0 = 2.0 * z1 * z1 * noiseVar / d0;
  out.kappa1 = 1.0 / (1.0 - u);
  out.kappa2 = k.c_alpha * z1 * z1 / (dz * dz);
  out.kappaTilde = 2.0 * out.kappa1 * std::sqrt(2.0 * k.ell_J_tilde / k.ell_c) *
                   std::pow(2.0 * out.kappa0 + out.kappa2, 0.25);
  try {
    out.kappa = stability_bound(spec, z2, z2, c0);
  } catch (const ConditionViolation&) {
  }
  return out;
}

std::vector<StabilityRow> run_stability_study(const GameSpec& spec, const Graphon& w,
                                              const std::vector<Graphon>& perturbations, int gridM) {
  const Grid grid(gridM);
  const DiscretizedOperator op = discretize(w, grid);
  const double wNorm = operator_norm(op).value;
  NashOptions opts;
  opts.tol = 1e-14;
  opts.wNorm = wNorm;
  const EquilibriumReport base = solve_nash(spec, op, opts);

  std::vector<StabilityRow> rows;
  for (const auto& wp : perturbations) {
    StabilityRow row{wp.describe(), kNaN, kNaN, kNaN, kNaN, false, {}};
    try {
      const DiscretizedOperator opP = discretize(wp, grid);
      const double wNormP = operator_norm(opP).value;
      NashOptions o = opts;
      o.wNorm = wNormP;
      const EquilibriumReport other = solve_nash(spec, opP, o);
      row.opNormDiff = operator_norm_difference(op, opP).value;
      row.equilibriumDiff = l2_dist(base.profile, other.profile);
      if (spec.bundle.c0) {
        row.c0 = *spec.bundle.c0;
      } else {
        // Fallback: the largest noise-free state |b(α_x, z_x)| met at either equilibrium.
        double c0 = 0.0;
        for (const auto* r : {&base, &other}) {
          for (int i = 0; i < grid.size(); ++i) {
            c0 = std::max(c0, std::abs(drift_value(spec, r->profile[i], r->aggregate[i])));
          }
        }
        row.c0 = c0;
      }
      row.kappaBound = stability_bound(spec, wNorm, wNormP, row.c0) * row.opNormDiff;
      row.ok = row.equilibriumDiff <= row.kappaBound * (1.0 + kStabilitySlack) + kStabilitySlack * 1e-3;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rate_table_csv(std::ostream& os, const RateTable& t) {
  os << "N,seed,dS,epsilon,opNorm,cutLower,cutUpper\n";
  for (const auto& r : t.rows) {
    os << r.N << ',' << r.seed << ',' << cell(r.dS) << ',' << cell(r.epsilon) << ',' << cell(r.opNorm) << ','
       << cell(r.cutLower) << ',' << cell(r.cutUpper) << '\n';
  }
}

void write_stability_csv(std::ostream& os, const std::vector<StabilityRow>& rows) {
  os << "perturbation,opNormDiff,equilibriumDiff,kappaBound,c0,ok\n";
  for (const auto& r : rows) {
    os << r.label << ',' << cell(r.opNormDiff) << ',' << cell(r.equilibriumDiff) << ',' << cell(r.kappaBound) << ','
       << cell(r.c0) << ',' << (r.ok ? 1 : 0) << '\n';
  }
}

std::string to_string(const PermutationSearch& s) {
  if (std::holds_alternative<IdentityRelabel>(s)) return "identity";
  if (std::holds_alternative<SortValues>(s)) return "sort";
  return "blocks:" + std::to_string(std::get<ExhaustiveBlocks>(s).blocks);
}

PermutationSearch parse_permutation_search(const std::string& text) {
  if (text == "identity") return IdentityRelabel{};
  if (text == "sort") return SortValues{};
  if (text.rfind("blocks:", 0) == 0) {
    const int k = std::stoi(text.substr(7));
    if (k < 1 || k > 9) throw ConfigError("exhaustive block search supports 1..9 blocks");
    return ExhaustiveBlocks{k};
  }
  throw ConfigError("unknown permutation search `" + text + "` (expected identity | sort | blocks:K)");
}

nlohmann::json study_metadata(const StudyConfig& cfg, const RateTable& t, const std::string& study) {
  nlohmann::json j;
  j["study"] = study;
  j["graphon"] = cfg.graphon.describe();
  j["game"] = to_json(cfg.game);
  j["Nlist"] = cfg.Nlist;
  j["sampling"] = to_string(cfg.sampling);
  j["seeds"] = cfg.seeds;
  j["gridM"] = cfg.gridM;
  j["dsSearch"] = to_string(cfg.dsSearch);
  j["cutResolution"] = cfg.cutResolution;
  j["fittedSlope"] = std::isnan(t.fittedSlope) ? nlohmann::json(nullptr) : nlohmann::json(t.fittedSlope);
  j["Ns"] = t.Ns;
  j["medians"] = t.medians;
  j["failures"] = t.failures;
  return j;
}

}  // namespace graphon_games
