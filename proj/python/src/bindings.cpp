#include "graphon_games/cli.hpp"
#include "graphon_games/convergence_lab.hpp"
#include "graphon_games/errors.hpp"
#include "graphon_games/finite_game.hpp"
#include "graphon_games/graphon_equilibrium.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace graphon_games;

namespace {

py::dict certificate_dict(const Certificate& c) {
  py::dict d;
  d["wNorm"] = c.wNorm;
  d["contractionMargin"] = c.contractionMargin;
  d["uniquenessValue"] = c.uniquenessValue;
  d["contractionOk"] = c.contractionOk;
  d["uniquenessOk"] = c.uniquenessOk;
  return d;
}

// JSON produced by the library goes to Python through its text form.
py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Static graphon games: equilibria, closed forms, price of anarchy, finite games";

  static py::exception<ConfigError> configError(m, "ConfigError", PyExc_ValueError);
  static py::exception<ConditionViolation> conditionViolation(m, "ConditionViolation", PyExc_ArithmeticError);
  static py::exception<NonConvergence> nonConvergence(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      configError(e.what());
    } catch (const ConditionViolation& e) {
      conditionViolation(e.what());
    } catch (const NonConvergence& e) {
      nonConvergence(e.what());
    }
  });

  m.def("grid_points", [](int M) { return Grid(M).points(); }, py::arg("M"));

  m.def(
      "operator_norm",
      [](const std::string& graphon, int M) { return operator_norm(discretize(parse_graphon(graphon), Grid(M))).value; },
      py::arg("graphon"), py::arg("M") = 1024);

  m.def(
      "eigenvalues",
      [](const std::string& graphon, int M, int k) {
        return eigen_decompose(discretize(parse_graphon(graphon), Grid(M)), k).values;
      },
      py::arg("graphon"), py::arg("M") = 512, py::arg("k") = 5);

  m.def(
      "resolvent",
      [](const std::string& graphon, double theta, int M) {
        const auto op = discretize(parse_graphon(graphon), Grid(M));
        return resolvent_apply(op, theta, GridProfile::constant(op.grid(), 1.0)).values();
      },
      py::arg("graphon"), py::arg("theta"), py::arg("M") = 1024,
      "[I - theta W]^{-1} 1 on the midpoint grid (Katz centrality).");

  m.def(
      "solve_nash",
      [](const std::string& game, const std::string& graphon, int M, double tol, int maxIter, double damping) {
        const auto op = discretize(parse_graphon(graphon), Grid(M));
        NashOptions o;
        o.tol = tol;
        o.maxIter = maxIter;
        o.damping = damping;
        const auto r = solve_nash(parse_game(game), op, o);
        py::dict d;
        d["x"] = op.grid().points();
        d["alpha"] = r.profile.values();
        d["z"] = r.aggregate.values();
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        d["converged"] = r.converged;
        d["certificate"] = certificate_dict(r.certificate);
        return d;
      },
      py::arg("game") = "beach", py::arg("graphon") = "constant:1", py::arg("M") = 1024, py::arg("tol") = 1e-12,
      py::arg("max_iter") = 10000, py::arg("damping") = 1.0);

  m.def(
      "price_of_anarchy",
      [](const std::string& game, const std::string& graphon, int M) {
        const auto r = price_of_anarchy(parse_game(game), discretize(parse_graphon(graphon), Grid(M)));
        py::dict d;
        d["poa"] = r.poa;
        d["nash_cost"] = r.nashCost;
        d["planner_cost"] = r.plannerCost;
        d["nash"] = r.nash.profile.values();
        d["planner"] = r.planner.profile.values();
        return d;
      },
      py::arg("game"), py::arg("graphon"), py::arg("M") = 512);

  m.def(
      "poa_closed_form",
      [](const std::string& family, double theta, double param) -> double {
        if (family == "constant") return poa_closed_form(poa_family::ConstantStrength{param}, theta);
        if (family == "powerlaw") return poa_closed_form(poa_family::PowerLaw{param}, theta);
        if (family == "normpowerlaw") return poa_closed_form(poa_family::NormalizedPowerLaw{param, std::nullopt}, theta);
        if (family == "threshold") return poa_closed_form(poa_family::Threshold{}, theta);
        throw ConfigError("family must be constant | powerlaw | normpowerlaw | threshold");
      },
      py::arg("family"), py::arg("theta"), py::arg("param") = 1.0);

  m.def(
      "sample_graph",
      [](const std::string& graphon, int N, const std::string& kind, std::uint64_t seed) {
        const auto g = sample_graph(parse_graphon(graphon), N, parse_sample_kind(kind), seed);
        return py::make_tuple(g.W, g.latent);
      },
      py::arg("graphon"), py::arg("N"), py::arg("kind") = "weighted", py::arg("seed") = 1,
      "Returns (W, sorted latent labels).");

  m.def(
      "finite_nash",
      [](const Eigen::MatrixXd& W, const std::string& game, const std::string& method) {
        const auto g = make_finite_game(W, parse_game(game));
        FiniteMethod fm = FiniteClosedForm{};
        if (method == "best-response") {
          fm = BestResponseIteration{};
        } else if (method != "closed-form") {
          throw ConfigError("method must be closed-form or best-response");
        }
        return solve_nash_finite(g, fm).alpha;
      },
      py::arg("W"), py::arg("game") = "beach", py::arg("method") = "closed-form");

  m.def(
      "epsilon_nash",
      [](const Eigen::MatrixXd& W, const Eigen::VectorXd& alpha, const std::string& game, int mcSamples,
         std::uint64_t seed) {
        const auto g = make_finite_game(W, parse_game(game));
        std::optional<NoiseBatch> noise;
        if (!analytic_cost_available(g)) noise = draw_noise(g.spec.noise, mcSamples, g.N, seed);
        const auto e = epsilon_nash_certify(g, alpha, BetaGrid{}, noise ? &*noise : nullptr);
        return py::make_tuple(e.epsilon, e.stdError);
      },
      py::arg("W"), py::arg("alpha"), py::arg("game") = "beach", py::arg("mc_samples") = 10000, py::arg("seed") = 1,
      "Returns (epsilon, standard error).");

  m.def(
      "convergence_study",
      [](const std::string& graphon, const std::string& game, std::vector<int> Nlist, std::vector<std::uint64_t> seeds,
         int gridM, const std::string& kind) {
        StudyConfig cfg;
        cfg.graphon = parse_graphon(graphon);
        cfg.game = parse_game(game);
        cfg.Nlist = std::move(Nlist);
        cfg.seeds = std::move(seeds);
        cfg.gridM = gridM;
        cfg.sampling = parse_sample_kind(kind);
        const auto t = run_convergence_study(cfg);
        py::dict d;
        d["N"] = t.Ns;
        d["median_dS"] = t.medians;
        d["slope"] = t.fittedSlope;
        return d;
      },
      py::arg("graphon") = "constant:0.5", py::arg("game") = "beach",
      py::arg("Nlist") = std::vector<int>{50, 100, 200, 400, 800},
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, py::arg("gridM") = 1600,
      py::arg("kind") = "bernoulli");

  m.def(
      "run",
      [](const py::dict& config) {
        const auto text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
        const auto cfg = cli::config_from_json(nlohmann::json::parse(text));
        std::ostringstream out;
        cli::run(cfg, out);
        return out.str();
      },
      py::arg("config"), "Runs one CLI command from a config dict (manifest `config` schema); returns its console text.");

  m.def(
      "game_spec", [](const std::string& game) { return json_to_py(to_json(parse_game(game))); }, py::arg("game"));
}
