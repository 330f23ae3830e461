#include "hawkes/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/error.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {

double projected_gradient_norm(const Eigen::VectorXd& alpha, const Eigen::VectorXd& gradient) {
  double norm = 0.0;
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    const double g = alpha(j) > 0.0 ? gradient(j) : std::max(gradient(j), 0.0);
    norm = std::max(norm, std::abs(g));
  }
  return norm;
}

NodeFit fit_node(const NodeData& data, double mu, const SolverOptions& opts) {
  const int d = data.dimension();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(d);
  if (opts.initial) {
    if (opts.initial->size() != d)
      throw Error(ErrorCode::InvalidArgument, "initial point must have D entries");
    alpha = opts.initial->cwiseMax(0.0);
  }

  NodeFit fit;
  FitDiagnostics& diag = fit.diagnostics;
  Eigen::VectorXd grad = score(data, mu, alpha);
  if (!grad.allFinite()) throw Error(ErrorCode::NonFinite, "score is not finite at the start point");

  double step = 1.0 / std::max(grad.norm(), 1e-300);
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    diag.projected_gradient_norm = projected_gradient_norm(alpha, grad);
    if (diag.projected_gradient_norm <= opts.tol) {
      diag.converged = true;
      break;
    }

    // Backtrack on the exact log-likelihood change until Armijo ascent holds.
    Eigen::VectorXd next;
    Eigen::VectorXd delta;
    double gain = 0.0;
    bool moved = false;
    for (int halvings = 0; halvings < 80; ++halvings) {
      next = (alpha + step * grad).cwiseMax(0.0);
      delta = next - alpha;
      if (delta.lpNorm<Eigen::Infinity>() == 0.0) break;
      gain = loglik_change(data, mu, alpha, delta);
      if (!std::isfinite(gain)) throw Error(ErrorCode::NonFinite, "log-likelihood is not finite");
      if (gain >= 1e-4 * grad.dot(delta) && gain > 0.0) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no representable ascent step is left

    const Eigen::VectorXd next_grad = score(data, mu, next);
    // Barzilai-Borwein step for the next trial (curvature is negative for ascent).
    const Eigen::VectorXd y = next_grad - grad;
    const double sy = delta.dot(y);
    step = sy < 0.0 ? std::clamp(delta.squaredNorm() / -sy, 1e-16, 1e16) : 2.0 * step;
    alpha = std::move(next);
    grad = next_grad;
  }

  diag.iterations = it;
  diag.projected_gradient_norm = projected_gradient_norm(alpha, grad);
  diag.converged = diag.projected_gradient_norm <= opts.tol;
  diag.loglik = loglik(data, mu, alpha);
  if (!std::isfinite(diag.loglik)) throw Error(ErrorCode::NonFinite, "log-likelihood is not finite");
  for (int j = 0; j < d; ++j)
    if (alpha(j) == 0.0) diag.active_set.push_back(j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(data, mu, alpha),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  diag.hessian_condition = mags.minCoeff() > 0.0 ? mags.maxCoeff() / mags.minCoeff()
                                                 : std::numeric_limits<double>::infinity();
  fit.alpha = std::move(alpha);
  return fit;
}

NodeFit fit_node(const EventSequence& seq, int node, double mu,
                 std::span<const KernelSpec> kernel_row, const SolverOptions& opts) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");
  return fit_node(NodeData(seq, node, kernel_row), mu, opts);
}

NetworkFit fit_all(const EventSequence& seq, const Eigen::VectorXd& mu, const KernelGrid& kernels,
                   const SolverOptions& opts, std::vector<int> nodes) {
  const int d = seq.node_count();
  if (mu.size() != d || kernels.node_count() != d)
    throw Error(ErrorCode::InvalidArgument, "mu and kernels must match the sequence's D");
  if (nodes.empty())
    for (int i = 0; i < d; ++i) nodes.push_back(i);
  for (int i : nodes)
    if (i < 0 || i >= d) throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(i));

  std::vector<NodeFit> fits(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    const int i = nodes[k];
    try {
      fits[k] = fit_node(seq, i, mu(i), kernels.row(i), opts);
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(i) + ": " + e.what());
    }
  });

  NetworkFit out;
  out.alpha = Eigen::MatrixXd::Zero(d, d);
  out.nodes = nodes;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    out.alpha.row(nodes[k]) = fits[k].alpha.transpose();
    out.diagnostics.push_back(std::move(fits[k].diagnostics));
  }
  return out;
}

}  // namespace hawkes
