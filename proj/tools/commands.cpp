#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "hawkes/analytic.hpp"
#include "hawkes/asymptotic.hpp"
#include "hawkes/error.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) { return std::isfinite(x) ? io::format_number(x) : std::string(); }

std::string join(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? ", " : "") + io::format_number(v(k));
  return s + "]";
}

std::vector<int> resolve_nodes(const std::vector<int>& nodes, int d) {
  if (nodes.empty()) {
    std::vector<int> all(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  for (int n : nodes)
    if (n < 0 || n >= d)
      throw Error(ErrorCode::NodeOutOfRange,
                  "node " + std::to_string(n) + " is outside [0, " + std::to_string(d) + ")");
  return nodes;
}

EventSequence load_for(const fs::path& events, const io::ExperimentConfig& cfg) {
  EventSequence seq = io::load_events(events, cfg.horizon, cfg.node_count);
  if (seq.node_count() != cfg.node_count)
    throw Error(ErrorCode::Parse, "events: D = " + std::to_string(seq.node_count()) +
                                      " but config D = " + std::to_string(cfg.node_count));
  return seq;
}

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1)");
}

json diagnostics_json(int node, const FitDiagnostics& d) {
  return {{"node", node},
          {"iterations", d.iterations},
          {"converged", d.converged},
          {"projected_gradient_norm", d.projected_gradient_norm},
          {"loglik", d.loglik},
          {"active_set", d.active_set},
          {"hessian_condition", d.hessian_condition}};
}

bool any_flag(const ReportFlags& f) {
  return f.singular_fisher || f.unbounded || f.infeasible || f.overflow || f.dropped_rows > 0 ||
         f.endpoint_outside_exact_set;
}

}  // namespace

MethodChoice method_from_string(const std::string& s) {
  if (s == "asymptotic") return MethodChoice::Asymptotic;
  if (s == "concentration") return MethodChoice::Concentration;
  if (s == "both") return MethodChoice::Both;
  throw Error(ErrorCode::InvalidArgument,
              "method must be asymptotic, concentration or both (got '" + s + "')");
}

std::vector<int> parse_nodes(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw Error(ErrorCode::InvalidArgument, "--nodes: '" + item + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

ConfidenceReport asymptotic_or_flagged(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                                       double epsilon, int node) {
  const int d = data.dimension();
  const FisherEstimate fisher = empirical_fisher(data, mu, alpha);
  if (!fisher.singular) {
    try {
      return asymptotic_ci(alpha, fisher.matrix, data.horizon(), epsilon, d, node);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularFisher) throw;
    }
  }
  ConfidenceReport r;
  r.method = CiMethod::Asymptotic;
  r.epsilon = epsilon;
  r.flags.singular_fisher = true;
  for (int j = 0; j < d; ++j) {
    EntryInterval e;
    e.i = node;
    e.j = j;
    e.point = alpha(j);
    e.lo = e.hi = kNaN;
    e.valid = false;
    r.entries.push_back(e);
  }
  return r;
}

NodeIntervals node_intervals(const EventSequence& seq, int node, double mu,
                             std::span<const KernelSpec> kernel_row, double epsilon,
                             MethodChoice method, const SolverOptions& solver) {
  NodeIntervals out;
  const ConcentrationProblem problem(seq, node, mu, kernel_row, epsilon);
  out.fit = fit_node(problem.data(), mu, solver);
  if (method != MethodChoice::Concentration)
    out.asymptotic = asymptotic_or_flagged(problem.data(), mu, out.fit.alpha, epsilon, node);
  if (method != MethodChoice::Asymptotic) {
    ConcentrationOptions opts;
    opts.solver = solver;
    out.concentration = concentration_ci(problem, out.fit, opts);
  }
  return out;
}

json ci_document(const EventSequence& seq, const io::ExperimentConfig& cfg, double epsilon,
                 MethodChoice method, const SolverOptions& solver, const std::vector<int>& nodes) {
  check_epsilon(epsilon);
  const int d = cfg.node_count;
  const auto which = resolve_nodes(nodes, d);
  std::vector<NodeIntervals> results(which.size());
  parallel_for(which.size(), [&](std::size_t k) {
    const int i = which[k];
    const auto row = cfg.kernels.row(i);
    results[k] = node_intervals(seq, i, cfg.mu(i), row, epsilon, method, solver);
  });

  Eigen::MatrixXd alpha_hat = Eigen::MatrixXd::Zero(d, d);
  ConfidenceReport asym;
  asym.method = CiMethod::Asymptotic;
  asym.epsilon = epsilon;
  ConfidenceReport conc;
  conc.method = CiMethod::Concentration;
  conc.epsilon = epsilon;
  json diagnostics = json::array();
  json polyhedra = json::array();
  for (std::size_t k = 0; k < which.size(); ++k) {
    const int i = which[k];
    const auto& r = results[k];
    alpha_hat.row(i) = r.fit.alpha.transpose();
    diagnostics.push_back(diagnostics_json(i, r.fit.diagnostics));
    if (r.asymptotic) asym.merge(*r.asymptotic);
    if (r.concentration) {
      conc.merge(r.concentration->report);
      json dropped = json::array();
      for (const auto& row : r.concentration->polyhedron.dropped)
        dropped.push_back({{"k", row.k}, {"reason", row.reason}});
      polyhedra.push_back({{"node", i},
                           {"threshold", std::log(2.0 * d / epsilon)},
                           {"g_at_estimate", io::vector_to_json(r.concentration->g_at_estimate)},
                           {"G", io::matrix_to_json(r.concentration->polyhedron.G)},
                           {"h", io::vector_to_json(r.concentration->polyhedron.h)},
                           {"direction", r.concentration->polyhedron.direction},
                           {"dropped", dropped}});
    }
  }

  json doc = {{"D", d},
              {"T", seq.horizon()},
              {"epsilon", epsilon},
              {"nodes", which},
              {"alpha_hat", io::matrix_to_json(alpha_hat)},
              {"diagnostics", diagnostics},
              {"reports", json::array()}};
  if (method != MethodChoice::Concentration) doc["reports"].push_back(io::report_to_json(asym));
  if (method != MethodChoice::Asymptotic) {
    doc["reports"].push_back(io::report_to_json(conc));
    doc["polyhedra"] = polyhedra;
  }
  if (method == MethodChoice::Both) {
    json table = json::array();
    for (const auto& c : conc.entries) {
      const EntryInterval* a = asym.find(c.i, c.j);
      const double aw = a && a->valid ? a->width() : kNaN;
      const double cw = c.valid ? c.width() : kNaN;
      table.push_back({{"i", c.i},
                       {"j", c.j},
                       {"concentration_width", cw},
                       {"asymptotic_width", aw},
                       {"difference", cw - aw}});
    }
    doc["width_comparison"] = table;
  }
  return doc;
}

std::string cmd_simulate(const SimulateArgs& a) {
  const auto cfg = io::load_config(a.config);
  const double horizon = a.horizon.value_or(cfg.horizon);
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  const ModelParams params = cfg.params();
  const double radius = params.branching_radius();
  if (radius >= 1.0)
    throw Error(ErrorCode::NonStationary,
                "branching spectral radius " + io::format_number(radius) + " is >= 1");
  const EventSequence seq = simulate(params, horizon, a.seed);
  io::save_events(a.out, seq);
  const Eigen::VectorXd lambda = stationary_intensity(params.mu, params.branching_matrix());
  return "events=" + std::to_string(seq.size()) + " branching_radius=" +
         io::format_number(radius) + " expected_intensity=" + join(lambda);
}

std::string cmd_fit(const FitArgs& a) {
  const auto cfg = io::load_config(a.config, false);
  const EventSequence seq = load_for(a.events, cfg);
  const auto which = resolve_nodes(a.nodes, cfg.node_count);
  const NetworkFit fit = fit_all(seq, cfg.mu, cfg.kernels, a.solver, which);
  json diagnostics = json::array();
  json loglik = json::array();
  for (std::size_t k = 0; k < fit.nodes.size(); ++k) {
    diagnostics.push_back(diagnostics_json(fit.nodes[k], fit.diagnostics[k]));
    loglik.push_back(fit.diagnostics[k].loglik);
  }
  const json doc = {{"D", cfg.node_count},
                    {"T", seq.horizon()},
                    {"nodes", fit.nodes},
                    {"alpha", io::matrix_to_json(fit.alpha)},
                    {"loglik", loglik},
                    {"diagnostics", diagnostics}};
  io::write_text(a.out, io::dump(doc));
  int converged = 0;
  for (const auto& d : fit.diagnostics) converged += d.converged ? 1 : 0;
  return "fitted " + std::to_string(fit.nodes.size()) + " node(s), " + std::to_string(converged) +
         " converged";
}

std::string cmd_ci(const CiArgs& a) {
  const auto cfg = io::load_config(a.config, false);
  const EventSequence seq = load_for(a.events, cfg);
  const json doc = ci_document(seq, cfg, a.epsilon, a.method, a.solver, a.nodes);
  io::write_text(a.out, io::dump(doc));
  return "wrote " + std::to_string(doc["reports"].size()) + " report(s) to " + a.out.string();
}

std::string cmd_coverage(const CoverageArgs& a) {
  check_epsilon(a.epsilon);
  if (a.reps < 1) throw Error(ErrorCode::InvalidArgument, "--reps must be >= 1");
  if (a.reps < 50) std::cerr << "warning: fewer than 50 replications; coverage is noisy\n";
  const auto cfg = io::load_config(a.config);
  const ModelParams params = cfg.params();
  if (params.explosive())
    throw Error(ErrorCode::NonStationary, "branching spectral radius is >= 1");
  const double horizon = a.horizon.value_or(cfg.horizon);
  const int d = cfg.node_count;
  const Eigen::MatrixXd& truth = params.alpha;

  // Per replication, per method (0 asymptotic, 1 concentration).
  struct Rep {
    Eigen::MatrixXd covered[2];
    Eigen::MatrixXd width[2];
    Eigen::VectorXd vector_covered[2];
    int flagged[2] = {0, 0};
  };
  std::vector<Rep> reps(static_cast<std::size_t>(a.reps));
  parallel_for(reps.size(), [&](std::size_t r) {
    const EventSequence seq = simulate(params, horizon, child_seed(a.seed, r));
    Rep& out = reps[r];
    for (int m = 0; m < 2; ++m) {
      out.covered[m] = Eigen::MatrixXd::Zero(d, d);
      out.width[m] = Eigen::MatrixXd::Constant(d, d, kNaN);
      out.vector_covered[m] = Eigen::VectorXd::Zero(d);
    }
    for (int i = 0; i < d; ++i) {
      const auto row = cfg.kernels.row(i);
      const ConcentrationProblem problem(seq, i, params.mu(i), row, a.epsilon);
      const NodeFit fit = fit_node(problem.data(), params.mu(i), a.solver);
      ConcentrationOptions opts;
      opts.solver = a.solver;
      opts.endpoint_diagnostics = false;
      const ConfidenceReport reports[2] = {
          asymptotic_or_flagged(problem.data(), params.mu(i), fit.alpha, a.epsilon, i),
          concentration_ci(problem, fit, opts).report};
      for (int m = 0; m < 2; ++m) {
        bool all = true;
        for (const auto& e : reports[m].entries) {
          const bool c = e.contains(truth(i, e.j));
          out.covered[m](i, e.j) = c ? 1.0 : 0.0;
          out.width[m](i, e.j) = e.valid ? e.width() : kNaN;
          all = all && c;
        }
        out.flagged[m] += any_flag(reports[m].flags) ? 1 : 0;
        out.vector_covered[m](i) = all ? 1.0 : 0.0;
      }
      out.vector_covered[1](i) = problem.exact_membership(truth.row(i).transpose()) ? 1.0 : 0.0;
    }
  });

  auto mean_finite = [](const auto& values) {
    double s = 0.0;
    int n = 0;
    for (double v : values)
      if (std::isfinite(v)) {
        s += v;
        ++n;
      }
    return n ? s / n : kNaN;
  };
  const char* names[2] = {"asymptotic", "concentration"};
  std::ostringstream csv;
  csv << "scope,rep,i,j,method,entry_coverage,vector_coverage,mean_width,width_ratio,flags\n";
  auto line = [&](const std::string& scope, const std::string& rep, const std::string& i,
                  const std::string& j, int m, double entry_cov, double vec_cov, double mw,
                  double ratio, int flags) {
    csv << scope << ',' << rep << ',' << i << ',' << j << ',' << names[m] << ',' << num(entry_cov)
        << ',' << num(vec_cov) << ',' << num(mw) << ',' << (m == 1 ? num(ratio) : std::string())
        << ',' << flags << '\n';
  };

  for (std::size_t r = 0; r < reps.size(); ++r) {
    const Rep& rep = reps[r];
    const double w0 = mean_finite(rep.width[0].reshaped());
    const double w1 = mean_finite(rep.width[1].reshaped());
    for (int m = 0; m < 2; ++m)
      line("rep", std::to_string(r), "", "", m, rep.covered[m].mean(), rep.vector_covered[m].mean(),
           m == 0 ? w0 : w1, w1 / w0, rep.flagged[m]);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double mw[2];
      double cov[2];
      for (int m = 0; m < 2; ++m) {
        std::vector<double> widths;
        double c = 0.0;
        for (const Rep& rep : reps) {
          widths.push_back(rep.width[m](i, j));
          c += rep.covered[m](i, j);
        }
        mw[m] = mean_finite(widths);
        cov[m] = c / static_cast<double>(reps.size());
      }
      for (int m = 0; m < 2; ++m)
        line("entry", "", std::to_string(i), std::to_string(j), m, cov[m], kNaN, mw[m],
             mw[1] / mw[0], 0);
    }
  }
  double agg_w[2];
  double agg_c[2];
  double agg_v[2];
  int agg_f[2] = {0, 0};
  for (int m = 0; m < 2; ++m) {
    std::vector<double> widths;
    double c = 0.0;
    double v = 0.0;
    for (const Rep& rep : reps) {
      for (Eigen::Index k = 0; k < rep.width[m].size(); ++k) widths.push_back(rep.width[m].data()[k]);
      c += rep.covered[m].mean();
      v += rep.vector_covered[m].mean();
      agg_f[m] += rep.flagged[m];
    }
    agg_w[m] = mean_finite(widths);
    agg_c[m] = c / static_cast<double>(reps.size());
    agg_v[m] = v / static_cast<double>(reps.size());
  }
  for (int m = 0; m < 2; ++m)
    line("aggregate", "", "", "", m, agg_c[m], agg_v[m], agg_w[m], agg_w[1] / agg_w[0], agg_f[m]);

  io::write_text(a.out, csv.str());
  return "coverage asymptotic=" + io::format_number(agg_c[0]) +
         " concentration_vector=" + io::format_number(agg_v[1]) + " over " +
         std::to_string(a.reps) + " replication(s)";
}

Eigen::MatrixXd load_matrix(const fs::path& path) {
  json j;
  try {
    j = json::parse(io::read_text(path));
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::Parse, "truth: malformed JSON in " + path.string());
  }
  if (j.is_object()) {
    if (j.contains("A"))
      j = j["A"];
    else if (j.contains("alpha"))
      j = j["alpha"];
    else
      throw Error(ErrorCode::Parse, "truth: expected an 'A' or 'alpha' field");
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::Parse, "truth: expected a square matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw Error(ErrorCode::Parse, "truth[" + std::to_string(i) + "]: expected " +
                                        std::to_string(n) + " numbers");
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number())
        throw Error(ErrorCode::Parse, "truth[" + std::to_string(i) + "][" + std::to_string(k) +
                                          "]: must be a number");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

json recover_edges(const ConfidenceReport& report, const std::optional<Eigen::MatrixXd>& truth) {
  int d = truth ? static_cast<int>(truth->rows()) : 0;
  for (const auto& e : report.entries) d = std::max({d, e.i + 1, e.j + 1});

  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(d, d);
  json edges = json::array();
  json missed = json::array();
  int missed_zero = 0;
  for (const auto& e : report.entries) {
    if (e.valid && e.lo > 0.0) {
      adjacency(e.i, e.j) = 1.0;
      edges.push_back({{"source", e.j}, {"target", e.i}, {"lo", e.lo}, {"hi", e.hi}});
    }
    if (truth && e.i < truth->rows() && e.j < truth->cols()) {
      const double t = (*truth)(e.i, e.j);
      if (!e.contains(t)) {
        missed.push_back(
            {{"source", e.j}, {"target", e.i}, {"truth", t}, {"lo", e.lo}, {"hi", e.hi},
             {"valid", e.valid}});
        if (t == 0.0) ++missed_zero;
      }
    }
  }
  json out = {{"method", std::string(to_string(report.method))},
              {"level", report.level()},
              {"D", d},
              {"edges", edges},
              {"adjacency", io::matrix_to_json(adjacency)}};
  if (truth) {
    const auto n = static_cast<int>(missed.size());
    out["non_covered"] = missed;
    out["non_covered_summary"] = {
        {"count", n},
        {"true_zero", missed_zero},
        {"true_zero_fraction", n ? static_cast<double>(missed_zero) / n : kNaN}};
  }
  return out;
}

std::string cmd_recover(const RecoverArgs& a) {
  json doc;
  try {
    doc = json::parse(io::read_text(a.report));
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::Parse, "report: malformed JSON in " + a.report.string());
  }
  std::vector<ConfidenceReport> reports;
  if (doc.is_object() && doc.contains("reports")) {
    if (!doc["reports"].is_array()) throw Error(ErrorCode::Parse, "reports: must be an array");
    for (const auto& r : doc["reports"]) reports.push_back(io::report_from_json(r));
  } else {
    reports.push_back(io::report_from_json(doc));
  }
  std::optional<Eigen::MatrixXd> truth;
  if (a.truth) truth = load_matrix(*a.truth);

  json out = {{"reports", json::array()}};
  std::string summary;
  for (const auto& r : reports) {
    json one = recover_edges(r, truth);
    summary += (summary.empty() ? "" : " ") + std::string(to_string(r.method)) + ": " +
               std::to_string(one["edges"].size()) + " edge(s)";
    out["reports"].push_back(std::move(one));
  }
  io::write_text(a.out, io::dump(out));
  return summary;
}

std::string cmd_report(const ReportArgs& a) {
  const auto cfg = io::load_config(a.config);
  const StationarySummary s = summarize(cfg.params());
  const json doc = {{"D", cfg.node_count},
                    {"beta", s.beta},
                    {"spectral_radius", s.spectral_radius},
                    {"lambda", io::vector_to_json(s.lambda)},
                    {"sigma", io::matrix_to_json(s.sigma)},
                    {"W", io::matrix_to_json(s.w)}};
  std::string text = io::dump(doc);
  if (a.out) io::write_text(*a.out, text);
  return text;
}

}  // namespace hawkes::cli
