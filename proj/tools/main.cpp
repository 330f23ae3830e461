#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "hawkes/error.hpp"

namespace {

void add_solver_flags(CLI::App* cmd, hawkes::SolverOptions& s) {
  cmd->add_option("--tol", s.tol, "Projected-gradient tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", s.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hawkes::cli;

  CLI::App app{"Confidence intervals for multivariate Hawkes influence matrices"};
  app.require_subcommand(1);

  SimulateArgs sim;
  double sim_horizon = 0.0;
  auto* s = app.add_subcommand("simulate", "Simulate an event sequence from a config");
  s->add_option("--config", sim.config, "Config JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sim.out, "Event CSV to write")->required();
  s->add_option("--seed", sim.seed, "RNG seed");
  s->add_option("--horizon", sim_horizon, "Override T")->check(CLI::PositiveNumber);

  FitArgs fit;
  std::string fit_nodes;
  auto* f = app.add_subcommand("fit", "Maximum-likelihood estimate of A");
  f->add_option("--events", fit.events, "Event CSV")->required()->check(CLI::ExistingFile);
  f->add_option("--config", fit.config, "Config JSON (A is ignored)")->required()->check(CLI::ExistingFile);
  f->add_option("--out", fit.out, "Output JSON")->required();
  f->add_option("--nodes", fit_nodes, "Comma-separated nodes to fit");
  add_solver_flags(f, fit.solver);

  CiArgs ci;
  std::string ci_method = "both";
  std::string ci_nodes;
  auto* c = app.add_subcommand("ci", "Confidence intervals for every entry of A");
  c->add_option("--events", ci.events, "Event CSV")->required()->check(CLI::ExistingFile);
  c->add_option("--config", ci.config, "Config JSON (A is ignored)")->required()->check(CLI::ExistingFile);
  c->add_option("--out", ci.out, "Output JSON")->required();
  c->add_option("--method", ci_method, "asymptotic, concentration or both");
  c->add_option("--epsilon", ci.epsilon, "Miscoverage level");
  c->add_option("--nodes", ci_nodes, "Comma-separated nodes");
  add_solver_flags(c, ci.solver);

  CoverageArgs cov;
  double cov_horizon = 0.0;
  auto* v = app.add_subcommand("coverage", "Monte-Carlo coverage of both interval types");
  v->add_option("--config", cov.config, "Config JSON with true A")->required()->check(CLI::ExistingFile);
  v->add_option("--out", cov.out, "Output CSV")->required();
  v->add_option("--horizon", cov_horizon, "Override T")->check(CLI::PositiveNumber);
  v->add_option("--reps", cov.reps, "Replications");
  v->add_option("--epsilon", cov.epsilon, "Miscoverage level");
  v->add_option("--seed", cov.seed, "RNG seed");
  add_solver_flags(v, cov.solver);

  RecoverArgs rec;
  std::string truth;
  auto* r = app.add_subcommand("recover", "Edges whose interval excludes 0");
  r->add_option("report", rec.report, "CI JSON from `ci`")->required()->check(CLI::ExistingFile);
  r->add_option("--out", rec.out, "Output JSON")->required();
  r->add_option("--truth", truth, "JSON matrix (or object with A/alpha) to check coverage against")
      ->check(CLI::ExistingFile);

  ReportArgs rep;
  std::string rep_out;
  auto* p = app.add_subcommand("report", "Stationary closed forms for an exponential config");
  p->add_option("--config", rep.config, "Config JSON")->required()->check(CLI::ExistingFile);
  p->add_option("--out", rep_out, "Output JSON (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s->parsed()) {
      if (sim_horizon > 0.0) sim.horizon = sim_horizon;
      std::cout << cmd_simulate(sim) << '\n';
    } else if (f->parsed()) {
      if (!fit_nodes.empty()) fit.nodes = parse_nodes(fit_nodes);
      std::cout << cmd_fit(fit) << '\n';
    } else if (c->parsed()) {
      ci.method = method_from_string(ci_method);
      if (!ci_nodes.empty()) ci.nodes = parse_nodes(ci_nodes);
      std::cout << cmd_ci(ci) << '\n';
    } else if (v->parsed()) {
      if (cov_horizon > 0.0) cov.horizon = cov_horizon;
      std::cout << cmd_coverage(cov) << '\n';
    } else if (r->parsed()) {
      if (!truth.empty()) rec.truth = truth;
      std::cout << cmd_recover(rec) << '\n';
    } else if (p->parsed()) {
      if (!rep_out.empty()) rep.out = rep_out;
      const std::string text = cmd_report(rep);
      if (!rep.out) std::cout << text;
    }
  } catch (const hawkes::Error& e) {
    std::cerr << "error: " << hawkes::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
