#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/concentration.hpp"
#include "hawkes/json_io.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/report.hpp"

namespace hawkes::cli {

namespace fs = std::filesystem;
using io::json;

struct SimulateArgs {
  fs::path config;
  fs::path out;
  std::uint64_t seed = 1;
  std::optional<double> horizon;
};

struct FitArgs {
  fs::path events;
  fs::path config;
  fs::path out;
  SolverOptions solver;
  std::vector<int> nodes;  // empty = all
};

enum class MethodChoice { Asymptotic, Concentration, Both };
MethodChoice method_from_string(const std::string& s);

struct CiArgs {
  fs::path events;
  fs::path config;
  fs::path out;
  MethodChoice method = MethodChoice::Both;
  double epsilon = 0.05;
  SolverOptions solver;
  std::vector<int> nodes;
};

struct CoverageArgs {
  fs::path config;
  fs::path out;
  std::optional<double> horizon;
  int reps = 200;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  SolverOptions solver;
};

struct RecoverArgs {
  fs::path report;
  fs::path out;
  std::optional<fs::path> truth;
};

struct ReportArgs {
  fs::path config;
  std::optional<fs::path> out;
};

// Each command writes its output file and returns a one-line human summary.

std::string cmd_simulate(const SimulateArgs& a);
std::string cmd_fit(const FitArgs& a);
std::string cmd_ci(const CiArgs& a);
std::string cmd_coverage(const CoverageArgs& a);
std::string cmd_recover(const RecoverArgs& a);
/// Returns the stationary summary JSON text (also written to `out` if set).
std::string cmd_report(const ReportArgs& a);

// Building blocks shared by the commands, exposed for tests.

/// Fit and both interval types for one node of one sequence.
struct NodeIntervals {
  NodeFit fit;
  std::optional<ConfidenceReport> asymptotic;
  std::optional<ConcentrationResult> concentration;
};

NodeIntervals node_intervals(const EventSequence& seq, int node, double mu,
                             std::span<const KernelSpec> kernel_row, double epsilon,
                             MethodChoice method, const SolverOptions& solver);

/// Asymptotic report, or one with invalid entries and the singular flag set.
ConfidenceReport asymptotic_or_flagged(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                                       double epsilon, int node);

json ci_document(const EventSequence& seq, const io::ExperimentConfig& cfg, double epsilon,
                 MethodChoice method, const SolverOptions& solver, const std::vector<int>& nodes);

/// Edge j -> i is declared when the lower bound of alpha_ij is > 0.
json recover_edges(const ConfidenceReport& report, const std::optional<Eigen::MatrixXd>& truth);

/// A matrix from a JSON file: a bare array of rows, or an object with "A"
/// or "alpha".
Eigen::MatrixXd load_matrix(const fs::path& path);

/// Parses "0,2,5".
std::vector<int> parse_nodes(const std::string& s);

}  // namespace hawkes::cli
