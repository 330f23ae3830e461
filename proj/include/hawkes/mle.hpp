#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/params.hpp"

namespace hawkes {

struct SolverOptions {
  double tol = 1e-8;       // projected-gradient infinity norm
  int max_iters = 10000;
  /// Starting point; defaults to alpha = 0.  Negative entries are projected.
  std::optional<Eigen::VectorXd> initial;
};

struct FitDiagnostics {
  int iterations = 0;
  bool converged = false;
  double projected_gradient_norm = 0.0;
  double loglik = 0.0;
  std::vector<int> active_set;  // coordinates held at 0
  /// Largest / smallest eigenvalue magnitude of the Hessian at the solution.
  double hessian_condition = 0.0;
};

struct NodeFit {
  Eigen::VectorXd alpha;
  FitDiagnostics diagnostics;
};

/// Projected-gradient infinity norm of an ascent problem on alpha >= 0.
double projected_gradient_norm(const Eigen::VectorXd& alpha, const Eigen::VectorXd& gradient);

/// argmax of the node log-likelihood over alpha >= 0.
NodeFit fit_node(const NodeData& data, double mu, const SolverOptions& opts = {});
NodeFit fit_node(const EventSequence& seq, int node, double mu,
                 std::span<const KernelSpec> kernel_row, const SolverOptions& opts = {});

struct NetworkFit {
  Eigen::MatrixXd alpha;             // row i = fit of node i (zero rows for skipped nodes)
  std::vector<int> nodes;            // nodes actually fitted
  std::vector<FitDiagnostics> diagnostics;  // parallel to `nodes`
};

/// Independent per-node fits, distributed over workers.  `nodes` empty means
/// all nodes.  Errors are rethrown with the node index in the message.
NetworkFit fit_all(const EventSequence& seq, const Eigen::VectorXd& mu, const KernelGrid& kernels,
                   const SolverOptions& opts = {}, std::vector<int> nodes = {});

}  // namespace hawkes
