#include "graphon_games/cli.hpp"

#include "graphon_games/errors.hpp"
#include "graphon_games/finite_game.hpp"
#include "graphon_games/graphon_equilibrium.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace graphon_games::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config <-> JSON

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"game", c.game},
          {"graphon", c.graphon},
          {"gridM", c.gridM},
          {"tol", c.tol},
          {"maxIter", c.maxIter},
          {"damping", c.damping},
          {"seed", c.seed},
          {"seeds", c.seeds},
          {"N", c.N},
          {"Nlist", c.Nlist},
          {"kind", c.kind},
          {"mcSamples", c.mcSamples},
          {"cutResolution", c.cutResolution},
          {"dsSearch", c.dsSearch},
          {"study", c.study},
          {"method", c.method},
          {"graphFile", c.graphFile},
          {"alphaFile", c.alphaFile},
          {"costMode", c.costMode},
          {"betaLo", c.betaLo},
          {"betaHi", c.betaHi},
          {"betaSteps", c.betaSteps},
          {"perturbations", c.perturbations},
          {"heatmap", c.heatmap},
          {"thetaRange", c.thetaRange},
          {"gammaRange", c.gammaRange},
          {"outDir", c.outDir},
          {"format", c.format}};
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", c.command);
    get("game", c.game);
    get("graphon", c.graphon);
    get("gridM", c.gridM);
    get("tol", c.tol);
    get("maxIter", c.maxIter);
    get("damping", c.damping);
    get("seed", c.seed);
    get("seeds", c.seeds);
    get("N", c.N);
    get("Nlist", c.Nlist);
    get("kind", c.kind);
    get("mcSamples", c.mcSamples);
    get("cutResolution", c.cutResolution);
    get("dsSearch", c.dsSearch);
    get("study", c.study);
    get("method", c.method);
    get("graphFile", c.graphFile);
    get("alphaFile", c.alphaFile);
    get("costMode", c.costMode);
    get("betaLo", c.betaLo);
    get("betaHi", c.betaHi);
    get("betaSteps", c.betaSteps);
    get("perturbations", c.perturbations);
    get("heatmap", c.heatmap);
    get("thetaRange", c.thetaRange);
    get("gammaRange", c.gammaRange);
    get("outDir", c.outDir);
    get("format", c.format);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Plot data

void write_series_dat(const fs::path& path, const std::string& name, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# " << name << "\n# x value\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
}

void write_profile_dat(const fs::path& path, const std::string& name, const GridProfile& p) {
  write_series_dat(path, name, p.grid().points(), p.values());
}

void write_heatmap_dat(const fs::path& path, const std::string& rowAxis, const std::string& colAxis,
                       const std::vector<double>& rows, const std::vector<double>& cols,
                       const std::vector<std::vector<double>>& values) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# rows: " << rowAxis << ", columns: " << colAxis << ", NaN marks infeasible cells\n";
  os << rowAxis << '\\' << colAxis;
  for (double c : cols) os << ' ' << format_double(c);
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << format_double(rows[r]);
    for (std::size_t k = 0; k < cols.size(); ++k) os << ' ' << (std::isnan(values[r][k]) ? "NaN" : format_double(values[r][k]));
    os << '\n';
  }
}

void write_rate_dat(const fs::path& path, const RateTable& t, bool epsilon) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# N median_" << (epsilon ? "epsilon" : "dS") << '\n';
  for (std::size_t k = 0; k < t.Ns.size(); ++k) os << t.Ns[k] << ' ' << format_double(t.medians[k]) << '\n';
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  fs::path dir;
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> outputs;
  bool dat() const { return cfg.format == "dat"; }

  std::ofstream open(const std::string& name) {
    outputs.push_back(name);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
  }
  fs::path dat_path(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
};

/// Built-in game text, or a path to a JSON game spec (the `to_json(GameSpec)` schema).
GameSpec load_game(const std::string& text) {
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    std::ifstream is(text);
    if (!is) throw ConfigError("cannot read game spec " + text);
    try {
      return spec_from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed game spec " + text + ": " + e.what());
    }
  }
  return parse_game(text);
}

std::vector<double> linspace(const std::vector<double>& range) {
  if (range.size() != 3 || range[2] < 1) throw ConfigError("ranges are lo,hi,count");
  const int n = static_cast<int>(range[2]);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? range[0] : range[0] + (range[1] - range[0]) * i / (n - 1);
  return v;
}

ClosedFormExample example_from_spec(const GameSpec& spec) {
  if (spec.name == "beach") return example::Beach{};
  if (spec.name == "cities") {
    const auto& q = std::get<QuadraticCost>(spec.cost);
    return example::Cities{-q.q1, -q.qz};
  }
  if (spec.name == "cournot") {
    const auto& d = std::get<AffineDrift>(spec.drift);
    return example::Cournot{d.a0, d.b1, d.c1};
  }
  throw ConfigError("closed forms exist for beach, cities and cournot only");
}

std::optional<PoAFamily> poa_family_of(const Graphon& w) {
  const auto& f = w.family();
  if (const auto* c = std::get_if<family::Constant>(&f)) return poa_family::ConstantStrength{c->a};
  if (const auto* p = std::get_if<family::PowerLaw>(&f)) return poa_family::PowerLaw{p->gamma};
  if (const auto* p = std::get_if<family::NormalizedPowerLaw>(&f)) return poa_family::NormalizedPowerLaw{p->gamma, p->g};
  if (std::holds_alternative<family::SimpleThreshold>(f)) return poa_family::Threshold{};
  return std::nullopt;
}

void write_profile_outputs(Context& ctx, const std::string& stem, const GridProfile& p) {
  auto os = ctx.open(stem + ".csv");
  write_profile_csv(os, p);
  if (ctx.dat()) write_profile_dat(ctx.dat_path(stem + ".dat"), stem, p);
}

std::string certificate_note(const Certificate& c) {
  if (!c.contractionOk) return "contraction fails: √c_z·‖W‖ = " + format_double(1.0 - c.contractionMargin) + " ≥ 1";
  if (!c.uniquenessOk) return "uniqueness not certified: condition value " + format_double(c.uniquenessValue) + " ≥ 1";
  return "unique equilibrium certified: condition value " + format_double(c.uniquenessValue) + " < 1";
}

void cmd_solve(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GameSpec spec = load_game(cfg.game);
  const DiscretizedOperator op = discretize(parse_graphon(cfg.graphon), Grid(cfg.gridM));
  NashOptions o;
  o.tol = cfg.tol;
  o.maxIter = cfg.maxIter;
  o.damping = cfg.damping;
  const EquilibriumReport r = solve_nash(spec, op, o);
  write_profile_outputs(ctx, "profile", r.profile);
  write_profile_outputs(ctx, "aggregate", r.aggregate);
  ctx.results = to_json(r);
  ctx.out << certificate_note(r.certificate) << '\n'
          << "iterations " << r.iterations << ", residual " << format_double(r.residual) << '\n';
  if (!r.converged) {
    throw NonConvergence("Nash iteration did not reach tol = " + format_double(cfg.tol), r.iterations, r.residual);
  }
}

void cmd_closed_form(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GameSpec spec = load_game(cfg.game);
  const DiscretizedOperator op = discretize(parse_graphon(cfg.graphon), Grid(cfg.gridM));
  const ClosedFormExample ex = example_from_spec(spec);
  const GridProfile cf = closed_form_nash(ex, op);
  write_profile_outputs(ctx, "closed_form", cf);
  const double residual = equilibrium_residual(spec, op, cf);
  ctx.results["equilibriumResidual"] = residual;
  ctx.out << "equilibrium-condition residual " << format_double(residual) << '\n';
  if (const auto* c = std::get_if<example::Cournot>(&ex)) {
    const CournotCheck chk = cournot_closed_form_check(c->a, c->b, c->c, op);
    ctx.results["cournotAlternativeResidual"] =
        chk.alternativeResidual ? nlohmann::json(*chk.alternativeResidual) : nlohmann::json(nullptr);
    ctx.out << "alternative formula a/(1+2b)[I − c(1+b)W]^{-1}1 residual "
            << (chk.alternativeResidual ? format_double(*chk.alternativeResidual) : std::string("undefined")) << '\n';
  }
}

void cmd_poa(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.heatmap.empty()) {
    const auto thetas = linspace(cfg.thetaRange);
    const auto gammas = linspace(cfg.gammaRange);
    std::vector<std::vector<double>> values(thetas.size(), std::vector<double>(gammas.size()));
    int infeasible = 0;
    for (std::size_t r = 0; r < thetas.size(); ++r) {
      for (std::size_t k = 0; k < gammas.size(); ++k) {
        PoAFamily fam;
        if (cfg.heatmap == "powerlaw") {
          fam = poa_family::PowerLaw{gammas[k]};
        } else if (cfg.heatmap == "normpowerlaw") {
          fam = poa_family::NormalizedPowerLaw{gammas[k], std::nullopt};
        } else {
          throw ConfigError("heatmap family must be powerlaw or normpowerlaw");
        }
        if (poa_feasible(fam, thetas[r])) {
          values[r][k] = poa_closed_form(fam, thetas[r]);
        } else {
          values[r][k] = std::numeric_limits<double>::quiet_NaN();
          ++infeasible;
        }
      }
    }
    write_heatmap_dat(ctx.dat_path("poa_heatmap.dat"), "theta", "gamma", thetas, gammas, values);
    ctx.results["infeasibleCells"] = infeasible;
    ctx.out << "heatmap " << thetas.size() << "x" << gammas.size() << ", infeasible cells " << infeasible << '\n';
    return;
  }
  const GameSpec spec = load_game(cfg.game);
  const Graphon w = parse_graphon(cfg.graphon);
  const DiscretizedOperator op = discretize(w, Grid(cfg.gridM));
  const PoAReport r = price_of_anarchy(spec, op);
  write_profile_outputs(ctx, "nash", r.nash.profile);
  write_profile_outputs(ctx, "planner", r.planner.profile);
  ctx.results["poa"] = r.poa;
  ctx.results["nashCost"] = r.nashCost;
  ctx.results["plannerCost"] = r.plannerCost;
  ctx.results["innerProductPoa"] = r.innerProductPoa ? nlohmann::json(*r.innerProductPoa) : nlohmann::json(nullptr);
  ctx.results["nash"] = to_json(r.nash);
  ctx.results["planner"] = to_json(r.planner);
  ctx.out << "PoA = " << format_double(r.poa) << '\n';
  if (spec.name == "cities") {
    if (auto fam = poa_family_of(w)) {
      const double theta = -std::get<QuadraticCost>(spec.cost).qz;
      const double cf = poa_closed_form(*fam, theta);
      ctx.results["closedFormPoa"] = cf;
      ctx.out << "closed form PoA = " << format_double(cf) << '\n';
    }
  }
}

SampledGraph graph_for(const RunConfig& cfg) {
  if (!cfg.graphFile.empty()) {
    std::ifstream is(cfg.graphFile);
    if (!is) throw ConfigError("cannot read graph file " + cfg.graphFile);
    return read_sampled_graph_csv(is);
  }
  return sample_graph(parse_graphon(cfg.graphon), cfg.N, parse_sample_kind(cfg.kind), cfg.seed);
}

void cmd_sample_graph(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const SampledGraph g = sample_graph(parse_graphon(cfg.graphon), cfg.N, parse_sample_kind(cfg.kind), cfg.seed);
  auto os = ctx.open("graph.csv");
  write_sampled_graph_csv(os, g);
  const FiniteGame game = make_finite_game(g.W, builtin_beach());
  ctx.results["frobeniusScaled"] = frobenius_scaled(game);
  ctx.results["operatorNormScaled"] = scaled_operator_norm(game);
  ctx.out << "sampled " << g.N << " nodes (" << to_string(g.kind) << ")\n";
}

CostMode parse_cost_mode(const std::string& s) {
  if (s == "auto") return CostMode::Auto;
  if (s == "analytic") return CostMode::Analytic;
  if (s == "mc") return CostMode::MonteCarlo;
  throw ConfigError("cost mode must be auto | analytic | mc");
}

void cmd_finite_solve(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const FiniteGame game = finite_game_from_sample(graph_for(cfg), load_game(cfg.game));
  std::optional<NoiseBatch> noise;
  FiniteMethod method = FiniteClosedForm{};
  if (cfg.method == "best-response") {
    BestResponseIteration br;
    br.tol = cfg.tol;
    br.maxIter = cfg.maxIter;
    br.damping = cfg.damping;
    method = br;
    if (!analytic_cost_available(game)) noise = draw_noise(game.spec.noise, cfg.mcSamples, game.N, cfg.seed);
  } else if (cfg.method != "closed-form") {
    throw ConfigError("finite method must be closed-form or best-response");
  }
  const FiniteNashResult r = solve_nash_finite(game, method, noise ? &*noise : nullptr);
  auto os = ctx.open("alpha.csv");
  write_alpha_csv(os, r.alpha);
  ctx.results["iterations"] = r.iterations;
  ctx.results["residual"] = r.residual;
  ctx.results["certificate"] = to_json(r.certificate);
  ctx.results["frobeniusScaled"] = frobenius_scaled(game);
  ctx.out << certificate_note(r.certificate) << "\niterations " << r.iterations << ", residual "
          << format_double(r.residual) << '\n';
}

void cmd_epsilon(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const FiniteGame game = finite_game_from_sample(graph_for(cfg), load_game(cfg.game));
  Eigen::VectorXd alpha;
  if (!cfg.alphaFile.empty()) {
    std::ifstream is(cfg.alphaFile);
    if (!is) throw ConfigError("cannot read profile file " + cfg.alphaFile);
    alpha = read_alpha_csv(is);
  } else {
    // μ^N of the graphon equilibrium.
    const int M = snap_grid(cfg.gridM, game.N);
    const DiscretizedOperator op = discretize(parse_graphon(cfg.graphon), Grid(M));
    NashOptions o;
    o.tol = cfg.tol;
    o.maxIter = cfg.maxIter;
    const EquilibriumReport r = solve_nash(game.spec, op, o);
    if (!r.converged) throw NonConvergence("graphon Nash did not converge", r.iterations, r.residual);
    alpha = block_average(r.profile, game.N);
  }
  const CostMode mode = parse_cost_mode(cfg.costMode);
  std::optional<NoiseBatch> noise;
  if (mode == CostMode::MonteCarlo || !analytic_cost_available(game)) {
    noise = draw_noise(game.spec.noise, cfg.mcSamples, game.N, cfg.seed ^ 0xa5a5ULL);
  }
  const EpsilonReport e =
      epsilon_nash_certify(game, alpha, BetaGrid{cfg.betaLo, cfg.betaHi, cfg.betaSteps}, noise ? &*noise : nullptr, mode);
  auto os = ctx.open("alpha.csv");
  write_alpha_csv(os, alpha);
  ctx.results["epsilon"] = e.epsilon;
  ctx.results["stdError"] = e.stdError;
  ctx.results["worstPlayer"] = e.worstPlayer;
  ctx.results["analytic"] = e.analytic;
  ctx.out << "epsilon = " << format_double(e.epsilon) << " (std error " << format_double(e.stdError) << ")\n";
}

StudyConfig study_config(const RunConfig& cfg) {
  StudyConfig s;
  s.graphon = parse_graphon(cfg.graphon);
  s.game = load_game(cfg.game);
  s.Nlist = cfg.Nlist;
  s.sampling = parse_sample_kind(cfg.kind);
  s.seeds = cfg.seeds;
  s.gridM = cfg.gridM;
  s.dsSearch = parse_permutation_search(cfg.dsSearch);
  s.cutResolution = cfg.cutResolution;
  s.mcSamples = cfg.mcSamples;
  return s;
}

void cmd_converge(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const StudyConfig s = study_config(cfg);
  const bool epsilon = cfg.study == "epsilon";
  if (!epsilon && cfg.study != "dS") throw ConfigError("study must be dS or epsilon");
  const RateTable t =
      epsilon ? run_epsilon_study(s, BetaGrid{cfg.betaLo, cfg.betaHi, cfg.betaSteps}, cfg.mcSamples)
              : run_convergence_study(s);
  {
    auto os = ctx.open("rates.csv");
    write_rate_table_csv(os, t);
  }
  {
    auto os = ctx.open("metadata.jsonl");
    os << study_metadata(s, t, epsilon ? "epsilon" : "convergence").dump() << '\n';
  }
  if (ctx.dat()) write_rate_dat(ctx.dat_path("rates.dat"), t, epsilon);
  ctx.results["fittedSlope"] = std::isnan(t.fittedSlope) ? nlohmann::json(nullptr) : nlohmann::json(t.fittedSlope);
  ctx.results["Ns"] = t.Ns;
  ctx.results["medians"] = t.medians;
  ctx.results["failures"] = t.failures;
  for (std::size_t k = 0; k < t.Ns.size(); ++k) {
    ctx.out << "N=" << t.Ns[k] << " median " << (epsilon ? "epsilon " : "dS ") << format_double(t.medians[k]) << '\n';
  }
  ctx.out << "fitted log-log slope " << format_double(t.fittedSlope) << '\n';
  for (const auto& f : t.failures) ctx.out << "row failed: " << f << '\n';
}

void cmd_stability(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.perturbations.empty()) throw ConfigError("stability needs at least one --perturb graphon");
  std::vector<Graphon> perturbations;
  for (const auto& p : cfg.perturbations) perturbations.push_back(parse_graphon(p));
  const auto rows = run_stability_study(load_game(cfg.game), parse_graphon(cfg.graphon), perturbations, cfg.gridM);
  {
    auto os = ctx.open("stability.csv");
    write_stability_csv(os, rows);
  }
  int violations = 0;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    ctx.out << r.label << ": ‖α−α′‖ = " << format_double(r.equilibriumDiff) << ", κ‖W−W′‖ = " << format_double(r.kappaBound)
            << (r.ok ? "" : "  VIOLATED") << (r.error.empty() ? "" : "  (" + r.error + ")") << '\n';
    if (!r.ok) ++violations;
    arr.push_back({{"perturbation", r.label}, {"ok", r.ok}, {"error", r.error}});
  }
  ctx.results["rows"] = arr;
  ctx.results["violations"] = violations;
  if (violations > 0) ctx.results["deferredError"] = "stability bound violated or not computable on some rows";
}

}  // namespace

void run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format != "csv" && cfg.format != "dat") throw ConfigError("format must be csv or dat");
  Context ctx{cfg, out, fs::path(cfg.outDir), nlohmann::json::object(), {}};
  fs::create_directories(ctx.dir);

  std::optional<NonConvergence> deferred;
  try {
    if (cfg.command == "solve") {
      cmd_solve(ctx);
    } else if (cfg.command == "closed-form") {
      cmd_closed_form(ctx);
    } else if (cfg.command == "poa") {
      cmd_poa(ctx);
    } else if (cfg.command == "sample-graph") {
      cmd_sample_graph(ctx);
    } else if (cfg.command == "finite-solve") {
      cmd_finite_solve(ctx);
    } else if (cfg.command == "epsilon") {
      cmd_epsilon(ctx);
    } else if (cfg.command == "converge") {
      cmd_converge(ctx);
    } else if (cfg.command == "stability") {
      cmd_stability(ctx);
    } else {
      throw ConfigError("unknown command `" + cfg.command + "`");
    }
  } catch (const NonConvergence& e) {
    // Outputs written so far are still useful; record them before failing.
    deferred = e;
  }

  nlohmann::json manifest;
  manifest["tool"] = "graphon-games";
  manifest["config"] = to_json(cfg);
  manifest["results"] = ctx.results;
  manifest["outputs"] = ctx.outputs;
  std::ofstream os(ctx.dir / "manifest.json");
  os << manifest.dump(2) << '\n';
  os.close();

  if (deferred) throw *deferred;
  if (ctx.results.contains("deferredError")) throw ConditionViolation(ctx.results["deferredError"].get<std::string>());
}

// ---------------------------------------------------------------------------
// Argument parsing

namespace {

void add_game(CLI::App* s, RunConfig& c) {
  s->add_option("--game", c.game, "beach | cities:k=K,theta=T | cournot:a=A,b=B,c=C | monotone")->capture_default_str();
}
void add_graphon(CLI::App* s, RunConfig& c) {
  s->add_option("--graphon", c.graphon,
                "constant:A | powerlaw:G | normpowerlaw:G[,g=S] | minmax | threshold | wattsstrogatz:p=P,rewire=R | "
                "step:a,b;c,d")
      ->capture_default_str();
}
void add_grid(CLI::App* s, RunConfig& c) { s->add_option("--gridM", c.gridM, "grid cells M")->capture_default_str(); }
void add_solver(CLI::App* s, RunConfig& c) {
  s->add_option("--tol", c.tol)->capture_default_str();
  s->add_option("--maxIter", c.maxIter)->capture_default_str();
  s->add_option("--damping", c.damping, "relaxation factor in (0,1]")->capture_default_str();
}
void add_sampling(CLI::App* s, RunConfig& c) {
  s->add_option("--N", c.N, "players")->capture_default_str();
  s->add_option("--kind", c.kind, "weighted | bernoulli")->capture_default_str();
  s->add_option("--seed", c.seed)->capture_default_str();
}
void add_beta(CLI::App* s, RunConfig& c) {
  s->add_option("--beta-lo", c.betaLo)->capture_default_str();
  s->add_option("--beta-hi", c.betaHi)->capture_default_str();
  s->add_option("--beta-steps", c.betaSteps)->capture_default_str();
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Static graphon games: equilibria, closed forms, price of anarchy and convergence experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  RunConfig cfg;
  std::string configPath;
  std::string outOverride;
  std::string formatOverride;
  app.add_option("--config", configPath, "re-run a manifest.json");
  app.add_option("--out", outOverride, "output directory (default: out)");
  app.add_option("--format", formatOverride, "csv | dat (dat adds plot-data files)");

  auto* solve = app.add_subcommand("solve", "graphon Nash equilibrium by best-response iteration");
  add_game(solve, cfg);
  add_graphon(solve, cfg);
  add_grid(solve, cfg);
  add_solver(solve, cfg);

  auto* closed = app.add_subcommand("closed-form", "Katz-centrality closed form for beach / cities / cournot");
  add_game(closed, cfg);
  add_graphon(closed, cfg);
  add_grid(closed, cfg);

  auto* poa = app.add_subcommand("poa", "price of anarchy (solver, closed form, or --heatmap)");
  add_game(poa, cfg);
  add_graphon(poa, cfg);
  add_grid(poa, cfg);
  poa->add_option("--heatmap", cfg.heatmap, "powerlaw | normpowerlaw: closed-form PoA over (theta, gamma)");
  poa->add_option("--theta-range", cfg.thetaRange, "lo,hi,count")->delimiter(',')->expected(3);
  poa->add_option("--gamma-range", cfg.gammaRange, "lo,hi,count")->delimiter(',')->expected(3);

  auto* sample = app.add_subcommand("sample-graph", "sample a weighted or Bernoulli graph from a graphon");
  add_graphon(sample, cfg);
  add_sampling(sample, cfg);

  auto* finite = app.add_subcommand("finite-solve", "Nash equilibrium of the N-player game");
  add_game(finite, cfg);
  add_graphon(finite, cfg);
  add_sampling(finite, cfg);
  add_solver(finite, cfg);
  finite->add_option("--graph", cfg.graphFile, "sampled graph CSV instead of sampling");
  finite->add_option("--method", cfg.method, "closed-form | best-response")->capture_default_str();
  finite->add_option("--mc-samples", cfg.mcSamples)->capture_default_str();

  auto* eps = app.add_subcommand("epsilon", "epsilon-Nash certificate of a profile on a finite game");
  add_game(eps, cfg);
  add_graphon(eps, cfg);
  add_grid(eps, cfg);
  add_sampling(eps, cfg);
  add_beta(eps, cfg);
  eps->add_option("--graph", cfg.graphFile, "sampled graph CSV instead of sampling");
  eps->add_option("--alpha", cfg.alphaFile, "profile CSV (i,alpha); default: block averages of the graphon Nash");
  eps->add_option("--cost-mode", cfg.costMode, "auto | analytic | mc")->capture_default_str();
  eps->add_option("--mc-samples", cfg.mcSamples)->capture_default_str();

  auto* conv = app.add_subcommand("converge", "finite-to-graphon convergence study over N and seeds");
  add_game(conv, cfg);
  add_graphon(conv, cfg);
  add_grid(conv, cfg);
  add_beta(conv, cfg);
  conv->add_option("--Nlist", cfg.Nlist)->delimiter(',');
  conv->add_option("--seeds", cfg.seeds)->delimiter(',');
  conv->add_option("--kind", cfg.kind, "weighted | bernoulli")->capture_default_str();
  conv->add_option("--study", cfg.study, "dS | epsilon")->capture_default_str();
  conv->add_option("--ds-search", cfg.dsSearch, "identity | sort | blocks:K")->capture_default_str();
  conv->add_option("--cut-resolution", cfg.cutResolution)->capture_default_str();
  conv->add_option("--mc-samples", cfg.mcSamples)->capture_default_str();

  auto* stab = app.add_subcommand("stability", "equilibrium sensitivity to graphon perturbations");
  add_game(stab, cfg);
  add_graphon(stab, cfg);
  add_grid(stab, cfg);
  stab->add_option("--perturb", cfg.perturbations, "perturbed graphon (repeatable)");

  // Defaults that differ per command.
  solve->preparse_callback([&](std::size_t) { cfg.gridM = 1024; });
  sample->preparse_callback([&](std::size_t) { cfg.kind = "weighted"; });
  conv->preparse_callback([&](std::size_t) {
    cfg.game = "beach";
    cfg.graphon = "constant:0.5";
    cfg.kind = "bernoulli";
    cfg.gridM = 1600;
    cfg.mcSamples = 2000;
  });
  stab->preparse_callback([&](std::size_t) { cfg.gridM = 256; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (!configPath.empty()) {
      if (app.get_subcommands().size() > 0) throw ConfigError("--config replays a manifest; do not combine it with a command");
      std::ifstream is(configPath);
      if (!is) throw ConfigError("cannot read " + configPath);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
      }
      cfg = config_from_json(j.contains("config") ? j.at("config") : j);
    } else {
      if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return kConfigError;
      }
      cfg.command = app.get_subcommands().front()->get_name();
    }
    if (!outOverride.empty()) cfg.outDir = outOverride;
    if (!formatOverride.empty()) cfg.format = formatOverride;
    run(cfg, std::cout);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConditionViolation& e) {
    std::cerr << "condition violated: " << e.what() << '\n';
    return kConditionViolation;
  } catch (const NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << format_double(e.residual()) << ")\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace graphon_games::cli
