#include "hawkes/process.hpp"

#include <cmath>
#include <string>

#include "hawkes/error.hpp"

namespace hawkes {

namespace {

void check_node(const EventSequence& seq, int i) {
  if (i < 0 || i >= seq.node_count())
    throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(i));
}

void check_params(const ModelParams& params, const EventSequence& seq) {
  if (params.node_count() != seq.node_count())
    throw Error(ErrorCode::InvalidArgument, "parameter and sequence node counts differ");
}

}  // namespace

Eigen::VectorXd eta(const ModelParams& params, const EventSequence& seq, int i, double t) {
  check_params(params, seq);
  check_node(seq, i);
  const int d = seq.node_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < d; ++j) {
    const auto ts = seq.node_times(j);
    const std::size_t n = seq.count_before(j, t);
    const KernelSpec& phi = params.kernels(i, j);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += evaluate(phi, t - ts[k]);
    out(j) = s;
  }
  return out;
}

double intensity(const ModelParams& params, const EventSequence& seq, int i, double t) {
  const Eigen::VectorXd e = eta(params, seq, i, t);
  return params.mu(i) + params.alpha.row(i).dot(e);
}

double compensator(const ModelParams& params, const EventSequence& seq, int i, double t_end) {
  check_params(params, seq);
  check_node(seq, i);
  double total = params.mu(i) * t_end;
  for (int j = 0; j < seq.node_count(); ++j) {
    const double a = params.alpha(i, j);
    if (a == 0.0) continue;
    const auto ts = seq.node_times(j);
    const std::size_t n = seq.count_before(j, t_end);
    const KernelSpec& phi = params.kernels(i, j);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += cumulative(phi, t_end - ts[k]);
    total += a * s;
  }
  return total;
}

EtaTracker::EtaTracker(const EventSequence& seq, std::span<const KernelSpec> kernel_row)
    : seq_(&seq),
      row_(kernel_row.begin(), kernel_row.end()),
      d_(seq.node_count()),
      exponential_(static_cast<std::size_t>(seq.node_count()), false),
      decay_(Eigen::VectorXd::Zero(seq.node_count())) {
  if (static_cast<int>(row_.size()) != d_)
    throw Error(ErrorCode::InvalidArgument, "kernel row must have D entries");
  for (int j = 0; j < d_; ++j) {
    if (const auto* e = std::get_if<Exponential>(&row_[j].variant())) {
      exponential_[j] = true;
      decay_(j) = e->beta;
    }
  }

  const auto times = seq.times();
  const auto nodes = seq.nodes();
  post_state_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), d_);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(d_);
  double prev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - prev;
    for (int j = 0; j < d_; ++j)
      if (exponential_[j]) state(j) *= std::exp(-decay_(j) * dt);
    if (exponential_[nodes[k]]) state(nodes[k]) += decay_(nodes[k]);
    post_state_.row(static_cast<Eigen::Index>(k)) = state.transpose();
    prev = times[k];
  }
}

void EtaTracker::eta_after(std::ptrdiff_t last, double t, Eigen::Ref<Eigen::VectorXd> out) const {
  const auto times = seq_->times();
  for (int j = 0; j < d_; ++j) {
    if (exponential_[j]) {
      out(j) = last < 0 ? 0.0
                        : post_state_(last, j) * std::exp(-decay_(j) * (t - times[last]));
    } else {
      const auto ts = seq_->node_times(j);
      const std::size_t n = seq_->count_before(j, t);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += evaluate(row_[j], t - ts[k]);
      out(j) = s;
    }
  }
}

Eigen::VectorXd EtaTracker::eta_at(double t) const {
  Eigen::VectorXd out(d_);
  eta_after(static_cast<std::ptrdiff_t>(seq_->count_before(t)) - 1, t, out);
  return out;
}

Eigen::VectorXd EtaTracker::integral_to(double t) const {
  Eigen::VectorXd out(d_);
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(seq_->count_before(t)) - 1;
  Eigen::VectorXd current(d_);
  eta_after(last, t, current);
  for (int j = 0; j < d_; ++j) {
    const std::size_t n = seq_->count_before(j, t);
    if (exponential_[j]) {
      // sum (1 - e^{-beta (t - t_e)}) = N_j(t-) - eta_j(t) / beta
      out(j) = static_cast<double>(n) - current(j) / decay_(j);
    } else {
      const auto ts = seq_->node_times(j);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += cumulative(row_[j], t - ts[k]);
      out(j) = s;
    }
  }
  return out;
}

}  // namespace hawkes
