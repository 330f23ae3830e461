#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"

namespace hawkes {

/// Parameters of one node's decoupled likelihood.
struct NodeModel {
  int node;
  double mu;
  Eigen::VectorXd alpha;
  std::vector<KernelSpec> kernels;  // phi_{node, j}, j = 0..D-1
};

/// The alpha-independent part of a node's likelihood: eta at every event
/// on the node (strict past) and the integral of eta over [0, T].
class NodeData {
 public:
  NodeData(const EventSequence& seq, int node, std::span<const KernelSpec> kernel_row);

  int node() const noexcept { return node_; }
  int dimension() const noexcept { return static_cast<int>(integral_.size()); }
  double horizon() const noexcept { return horizon_; }
  std::size_t event_count() const noexcept { return times_.size(); }

  std::span<const double> event_times() const noexcept { return times_; }
  /// Row e is eta(t_e) for the e-th event on the node.
  const Eigen::MatrixXd& event_eta() const noexcept { return eta_; }
  /// Integral of eta over [0, T].
  const Eigen::VectorXd& eta_integral() const noexcept { return integral_; }

  /// lambda at each node event for the given parameters.
  Eigen::VectorXd event_intensity(double mu, const Eigen::VectorXd& alpha) const;

 private:
  int node_;
  double horizon_;
  std::vector<double> times_;
  Eigen::MatrixXd eta_;
  Eigen::VectorXd integral_;
};

double loglik(const NodeData& data, double mu, const Eigen::VectorXd& alpha);
/// loglik(alpha + step) - loglik(alpha), accurate even when the change is
/// far below the rounding level of loglik itself.
double loglik_change(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& step);
Eigen::VectorXd score(const NodeData& data, double mu, const Eigen::VectorXd& alpha);
Eigen::MatrixXd hessian(const NodeData& data, double mu, const Eigen::VectorXd& alpha);

struct FisherEstimate {
  Eigen::MatrixXd matrix;
  bool singular = false;  // rank < D
};

/// -hessian / T.
FisherEstimate empirical_fisher(const NodeData& data, double mu, const Eigen::VectorXd& alpha);

/// (1/t) sum over node events before t of eta eta^T / lambda^2, or the
/// identity when that sum is rank deficient.
Eigen::MatrixXd adapted_fisher(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                               double t);

/// Smallest eigenvalue below 1e-10 times the largest (or no positive one).
bool rank_deficient(const Eigen::MatrixXd& symmetric);

double loglik(const NodeModel& m, const EventSequence& seq);
Eigen::VectorXd score(const NodeModel& m, const EventSequence& seq);
Eigen::MatrixXd hessian(const NodeModel& m, const EventSequence& seq);
FisherEstimate empirical_fisher(const NodeModel& m, const EventSequence& seq);
Eigen::MatrixXd adapted_fisher(const NodeModel& m, const EventSequence& seq, double t);

}  // namespace hawkes
