#include "hawkes/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hawkes/error.hpp"
#include "hawkes/process.hpp"

namespace hawkes {

namespace {

void check_model(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");
  if (alpha.size() != data.dimension())
    throw Error(ErrorCode::InvalidArgument, "alpha must have D entries");
}

NodeData data_for(const NodeModel& m, const EventSequence& seq) {
  return NodeData(seq, m.node, m.kernels);
}

}  // namespace

NodeData::NodeData(const EventSequence& seq, int node, std::span<const KernelSpec> kernel_row)
    : node_(node), horizon_(seq.horizon()) {
  if (node < 0 || node >= seq.node_count())
    throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(node));
  const EtaTracker tracker(seq, kernel_row);
  const int d = seq.node_count();
  const auto times = seq.times();
  const auto nodes = seq.nodes();

  std::size_t n = 0;
  for (int u : nodes) n += (u == node);
  times_.reserve(n);
  eta_.resize(static_cast<Eigen::Index>(n), d);
  Eigen::VectorXd row(d);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (nodes[k] != node) continue;
    tracker.eta_after(static_cast<std::ptrdiff_t>(k) - 1, times[k], row);
    eta_.row(static_cast<Eigen::Index>(times_.size())) = row.transpose();
    times_.push_back(times[k]);
  }
  // Events at exactly T contribute nothing to the integral; count_before is strict.
  integral_ = tracker.integral_to(horizon_);
}

Eigen::VectorXd NodeData::event_intensity(double mu, const Eigen::VectorXd& alpha) const {
  return (eta_ * alpha).array() + mu;
}

double loglik(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  check_model(data, mu, alpha);
  const Eigen::VectorXd lam = data.event_intensity(mu, alpha);
  return -mu * data.horizon() - alpha.dot(data.eta_integral()) + lam.array().log().sum();
}

double loglik_change(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& step) {
  check_model(data, mu, alpha);
  const Eigen::VectorXd lam = data.event_intensity(mu, alpha);
  const Eigen::VectorXd dlam = data.event_eta() * step;
  double s = -step.dot(data.eta_integral());
  for (Eigen::Index e = 0; e < lam.size(); ++e) s += std::log1p(dlam(e) / lam(e));
  return s;
}

Eigen::VectorXd score(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  check_model(data, mu, alpha);
  const Eigen::VectorXd lam = data.event_intensity(mu, alpha);
  return data.event_eta().transpose() * lam.cwiseInverse() - data.eta_integral();
}

Eigen::MatrixXd hessian(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  check_model(data, mu, alpha);
  const Eigen::VectorXd lam = data.event_intensity(mu, alpha);
  const Eigen::MatrixXd scaled = lam.cwiseInverse().asDiagonal() * data.event_eta();
  Eigen::MatrixXd h = -(scaled.transpose() * scaled);
  return 0.5 * (h + h.transpose());
}

bool rank_deficient(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  return !(hi > 0.0) || lo < 1e-10 * hi;
}

FisherEstimate empirical_fisher(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  FisherEstimate f;
  f.matrix = -hessian(data, mu, alpha) / data.horizon();
  f.singular = rank_deficient(f.matrix);
  return f;
}

Eigen::MatrixXd adapted_fisher(const NodeData& data, double mu, const Eigen::VectorXd& alpha,
                               double t) {
  check_model(data, mu, alpha);
  const int d = data.dimension();
  const auto times = data.event_times();
  const auto n = static_cast<Eigen::Index>(std::lower_bound(times.begin(), times.end(), t) -
                                           times.begin());
  if (n == 0 || !(t > 0.0)) return Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd lam = (data.event_eta().topRows(n) * alpha).array() + mu;
  const Eigen::MatrixXd scaled = lam.cwiseInverse().asDiagonal() * data.event_eta().topRows(n);
  Eigen::MatrixXd sum = scaled.transpose() * scaled;
  if (rank_deficient(sum)) return Eigen::MatrixXd::Identity(d, d);
  return sum / t;
}

double loglik(const NodeModel& m, const EventSequence& seq) {
  return loglik(data_for(m, seq), m.mu, m.alpha);
}
Eigen::VectorXd score(const NodeModel& m, const EventSequence& seq) {
  return score(data_for(m, seq), m.mu, m.alpha);
}
Eigen::MatrixXd hessian(const NodeModel& m, const EventSequence& seq) {
  return hessian(data_for(m, seq), m.mu, m.alpha);
}
FisherEstimate empirical_fisher(const NodeModel& m, const EventSequence& seq) {
  return empirical_fisher(data_for(m, seq), m.mu, m.alpha);
}
Eigen::MatrixXd adapted_fisher(const NodeModel& m, const EventSequence& seq, double t) {
  return adapted_fisher(data_for(m, seq), m.mu, m.alpha, t);
}

}  // namespace hawkes
