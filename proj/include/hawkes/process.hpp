#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/params.hpp"

namespace hawkes {

/// lambda_i(t) = mu_i + sum over events strictly before t of alpha_ij phi_ij(t - t_e).
double intensity(const ModelParams& params, const EventSequence& seq, int i, double t);

/// eta_i(t): entry j sums phi_ij(t - t_e) over node-j events strictly before t.
Eigen::VectorXd eta(const ModelParams& params, const EventSequence& seq, int i, double t);

/// mu_i t_end + sum_j alpha_ij sum_{t_e < t_end} Phi_ij(t_end - t_e).
double compensator(const ModelParams& params, const EventSequence& seq, int i, double t_end);

/// Fast evaluation of eta_i(t) and its running integral for one target node.
///
/// Exponential columns are advanced recursively from per-event states; the
/// rest fall back to exact sums over the node's history.  No tail truncation.
class EtaTracker {
 public:
  EtaTracker(const EventSequence& seq, std::span<const KernelSpec> kernel_row);

  int dimension() const noexcept { return d_; }
  const EventSequence& sequence() const noexcept { return *seq_; }

  /// eta(t) for t in (t_k, t_{k+1}], where k = `last` is the index of the
  /// most recent event strictly before t (or -1 when there is none).
  void eta_after(std::ptrdiff_t last, double t, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd eta_at(double t) const;

  /// F(t) = integral of eta over [0, t].
  Eigen::VectorXd integral_to(double t) const;

 private:
  const EventSequence* seq_;
  std::vector<KernelSpec> row_;
  int d_;
  std::vector<bool> exponential_;
  Eigen::VectorXd decay_;
  // Row k: exponential-column state eta(t_k+) just after event k.
  Eigen::MatrixXd post_state_;
};

}  // namespace hawkes
