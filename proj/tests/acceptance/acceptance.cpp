// Prints one PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include "../common/property_suite.hpp"

#include "graphon_games/convergence_lab.hpp"
#include "graphon_games/finite_game.hpp"
#include "graphon_games/graphon_equilibrium.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace graphon_games;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

double sup_against(const GridProfile& p, const std::function<double(double)>& f) {
  double e = 0;
  for (int i = 0; i < p.size(); ++i) e = std::max(e, std::abs(p[i] - f(p.grid().point(i))));
  return e;
}

Outcome c1() {
  bool ok = true;
  std::string d;
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const auto t0 = Clock::now();
    const auto op = discretize(Graphon::constant(a), Grid(512));
    const auto r = solve_nash(builtin_beach(), op);
    const double err = sup_against(r.profile, [&](double) { return 1.0 / (3.0 - a); });
    const double t = seconds_since(t0);
    ok = ok && r.converged && err <= 1e-8 && t < 1.0;
    d += "a=" + fmt(a) + " err=" + fmt(err) + " t=" + fmt(t) + "s; ";
  }
  return {ok, d};
}

Outcome c2() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string d;
  for (double g : {0.1, 0.2, 0.3}) {
    const auto op = discretize(Graphon::power_law(g), Grid(4096));
    const auto r = solve_nash(builtin_beach(), op);
    const double err = sup_against(r.profile, [&](double x) { return analytic::beach_power_law(g, x); });
    ok = ok && r.converged && err <= 5e-3;
    d += "gamma=" + fmt(g) + " err=" + fmt(err) + "; ";
  }
  const double t = seconds_since(t0);
  d += "t=" + fmt(t) + "s";
  return {ok && t < 10.0, d};
}

Outcome c3() {
  const auto op = discretize(Graphon::min_max(), Grid(2048));
  const auto r = resolvent_apply(op, 1.0 / 3.0, GridProfile::constant(op.grid(), 1.0), NeumannSeries{});
  const double err = sup_against(r, [](double x) { return analytic::minmax_resolvent(x, 200); });
  const double literal = sup_against(r, [](double x) { return analytic::minmax_resolvent_literal(x, 200); });
  const auto ep = eigen_decompose(op, 5);
  double eigErr = 0;
  for (int k = 1; k <= 5; ++k) eigErr = std::max(eigErr, std::abs(ep.values[k - 1] - 1.0 / (M_PI * M_PI * k * k)));
  return {err <= 1e-6 && eigErr <= 1e-4, "resolvent err=" + fmt(err) + " (literal series " + fmt(literal) +
                                              "); eigenvalue err=" + fmt(eigErr)};
}

Outcome c4() {
  const auto op = discretize(Graphon::simple_threshold(), Grid(2048));
  const auto r = solve_nash(builtin_beach(), op);
  const double err = sup_against(r.profile, analytic::beach_threshold);
  return {r.converged && err <= 1e-6, "err=" + fmt(err)};
}

Outcome c5() {
  bool ok = true;
  std::string d;
  for (auto [theta, a] : std::vector<std::pair<double, double>>{{0.1, 1}, {0.25, 1}, {0.2, 2}}) {
    const auto op = discretize(Graphon::constant(a), Grid(256));
    const double solver = price_of_anarchy(builtin_cities(1.0, theta), op).poa;
    const double cf = poa_closed_form(poa_family::ConstantStrength{a}, theta);
    ok = ok && std::abs(solver - cf) <= 1e-8;
    d += "const(" + fmt(theta) + "," + fmt(a) + ") diff=" + fmt(std::abs(solver - cf)) + "; ";
  }
  double prev = INFINITY;
  bool monoThreshold = true;
  for (double theta : {0.2, 0.4, 0.7}) {
    const auto op = discretize(Graphon::simple_threshold(), Grid(2048));
    const double solver = price_of_anarchy(builtin_cities(1.0, theta), op).poa;
    const double cf = poa_closed_form(poa_family::Threshold{}, theta);
    ok = ok && std::abs(solver - cf) <= 1e-6;
    monoThreshold = monoThreshold && solver < prev;
    prev = solver;
    d += "threshold(" + fmt(theta) + ") diff=" + fmt(std::abs(solver - cf)) + "; ";
  }
  prev = INFINITY;
  bool monoConstant = true;
  const auto op = discretize(Graphon::constant(1.0), Grid(256));
  for (double theta : {0.05, 0.1, 0.2, 0.25, 0.3, 0.4}) {
    const double solver = price_of_anarchy(builtin_cities(1.0, theta), op).poa;
    monoConstant = monoConstant && solver < prev;
    prev = solver;
  }
  d += std::string("monotone: constant=") + (monoConstant ? "yes" : "no") + " threshold=" + (monoThreshold ? "yes" : "no");
  return {ok && monoConstant && monoThreshold, d};
}

Outcome c6() {
  bool ok = true;
  std::string d;
  for (const auto& [name, w] : std::vector<std::pair<std::string, Graphon>>{{"constant:0.5", Graphon::constant(0.5)},
                                                                            {"powerlaw:0.2", Graphon::power_law(0.2)}}) {
    const auto op = discretize(w, Grid(1024));
    const auto chk = cournot_closed_form_check(1.0, 1.0, 0.2, op);
    ok = ok && chk.derivedResidual <= 1e-9;
    d += name + " derived=" + fmt(chk.derivedResidual) + " alternative=" +
         (chk.alternativeResidual ? fmt(*chk.alternativeResidual) : std::string("n/a")) + "; ";
  }
  return {ok, d};
}

Outcome c7() {
  const auto suite = testing::run_property_suite(1000, 7);
  bool ok = true;
  std::string d;
  for (const auto* r : suite.all()) {
    ok = ok && r->violations == 0 && r->trials >= 1000;
    d += r->name + " " + std::to_string(r->violations) + "/" + std::to_string(r->trials) + "; ";
  }
  return {ok, d};
}

Outcome c8() {
  const auto g = sample_bernoulli(Graphon::constant(0.5), 50, 2024);
  const FiniteGame game = finite_game_from_sample(g, builtin_beach());
  const auto cf = solve_nash_finite(game, FiniteClosedForm{});
  const auto& q = std::get<QuadraticCost>(game.spec.cost);
  const Eigen::VectorXd zbar = game.W * cf.alpha / game.N;
  const double foc = (2 * q.q2 * cf.alpha.array() + q.q1 + q.qz * zbar.array()).abs().maxCoeff();
  const auto br = solve_nash_finite(game, BestResponseIteration{});
  const double agree = (br.alpha - cf.alpha).cwiseAbs().maxCoeff();
  const NoiseBatch noise = draw_noise(game.spec.noise, 10000, game.N, 99);
  const auto eps = epsilon_nash_certify(game, cf.alpha, BetaGrid{}, &noise, CostMode::MonteCarlo);
  const auto epsA = epsilon_nash_certify(game, cf.alpha, BetaGrid{}, nullptr, CostMode::Analytic);
  const bool ok = foc <= 1e-10 && agree <= 1e-8 && eps.epsilon <= 1e-6 + 3 * eps.stdError;
  return {ok, "FOC=" + fmt(foc) + " BR-agree=" + fmt(agree) + " eps_MC=" + fmt(eps.epsilon) + " (se " +
                  fmt(eps.stdError) + ") eps_analytic=" + fmt(epsA.epsilon)};
}

Outcome c9() {
  const auto t0 = Clock::now();
  StudyConfig cfg;
  const RateTable t = run_convergence_study(cfg);
  const double secs = seconds_since(t0);
  bool dec = t.Ns.size() == cfg.Nlist.size();
  for (std::size_t k = 1; k < t.medians.size(); ++k) dec = dec && t.medians[k] < t.medians[k - 1];
  std::string d = "medians";
  for (double m : t.medians) d += " " + fmt(m);
  d += "; slope=" + fmt(t.fittedSlope) + " t=" + fmt(secs) + "s";
  return {dec && t.fittedSlope <= -0.2 && t.failures.empty() && secs < 300, d};
}

Outcome c10() {
  const auto t0 = Clock::now();
  StudyConfig cfg;
  const RateTable t = run_epsilon_study(cfg, BetaGrid{}, cfg.mcSamples);
  const double secs = seconds_since(t0);
  const double e50 = median_for(t, 50, true), e800 = median_for(t, 800, true);
  return {e800 < e50 / 2 && secs < 300, "median eps_50=" + fmt(e50) + " eps_800=" + fmt(e800) + " t=" + fmt(secs) + "s"};
}

Outcome c11() {
  const auto rows = run_stability_study(builtin_cities(1.0, 0.2), Graphon::constant(1.0),
                                        {Graphon::constant(1.01), Graphon::constant(1.05), Graphon::constant(1.1)}, 256);
  bool ok = rows.size() == 3;
  std::string d;
  for (const auto& r : rows) {
    ok = ok && r.ok && r.error.empty();
    d += r.label + " diff=" + fmt(r.equilibriumDiff) + " bound=" + fmt(r.kappaBound) + "; ";
  }
  return {ok, d};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

Outcome c12() {
  const std::string exe = GRAPHON_GAMES_CLI_PATH;
  const fs::path root = fs::temp_directory_path() / "graphon_games_acceptance_c12";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"solve", "solve --graphon powerlaw:0.2 --gridM 512"},
      {"closed", "closed-form --game cities:k=1,theta=0.3 --graphon minmax --gridM 256"},
      {"poa", "poa --game cities:k=1,theta=0.2 --graphon threshold --gridM 256"},
      {"sample", "sample-graph --graphon wattsstrogatz:p=0.2,rewire=0.1 --N 60 --kind bernoulli --seed 5"},
      {"finite", "finite-solve --game beach --graphon minmax --N 40 --method best-response --seed 3"},
      {"epsilon", "epsilon --game beach:sigma=0.5 --graphon constant:0.5 --N 30 --cost-mode mc --mc-samples 500"},
      {"converge", "converge --Nlist 20,40 --seeds 1,2 --gridM 400"},
      {"stability", "stability --game cities:k=1,theta=0.2 --graphon constant:1 --perturb constant:1.05"}};
  int files = 0;
  for (const auto& [name, args] : runs) {
    const fs::path a = root / name / "a", b = root / name / "b";
    const std::string first = exe + " " + args + " --out " + a.string() + " > /dev/null";
    const std::string again = exe + " --config " + (a / "manifest.json").string() + " --out " + b.string() + " > /dev/null";
    if (std::system(first.c_str()) != 0) return {false, name + ": first run failed"};
    if (std::system(again.c_str()) != 0) return {false, name + ": manifest re-run failed"};
    std::ifstream is(a / "manifest.json");
    const auto manifest = nlohmann::json::parse(is);
    for (const auto& out : manifest.at("outputs")) {
      const std::string file = out.get<std::string>();
      if (!same_bytes(a / file, b / file)) return {false, name + ": " + file + " differs"};
      ++files;
    }
  }
  fs::remove_all(root);
  return {files > 0, std::to_string(runs.size()) + " commands, " + std::to_string(files) + " output files identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 beach/constant closed form", c1},   {"2 beach/power-law closed form", c2},
      {"3 min-max resolvent and spectrum", c3}, {"4 beach/threshold ansatz", c4},
      {"5 cities price of anarchy", c5},       {"6 cournot closed form", c6},
      {"7 Lipschitz property suite", c7},      {"8 finite-game exactness", c8},
      {"9 convergence study", c9},             {"10 epsilon-Nash study", c10},
      {"11 stability bound", c11},             {"12 manifest determinism", c12}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " -- " << o.detail << std::endl;
  }
  return failures;
}
