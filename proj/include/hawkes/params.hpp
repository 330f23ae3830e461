#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hawkes/kernel.hpp"

namespace hawkes {

/// D x D grid of influence kernels, row = target node, column = source node.
class KernelGrid {
 public:
  KernelGrid() = default;
  /// One spec shared by every pair.
  KernelGrid(int node_count, const KernelSpec& shared);
  /// Row-major list of D*D specs.
  KernelGrid(int node_count, std::vector<KernelSpec> specs);

  int node_count() const noexcept { return d_; }
  const KernelSpec& operator()(int target, int source) const { return specs_[target * d_ + source]; }
  std::vector<KernelSpec> row(int target) const;

  bool all_exponential() const noexcept;
  /// Integral of each kernel over [0, inf).
  Eigen::MatrixXd masses() const;

 private:
  int d_ = 0;
  std::vector<KernelSpec> specs_;
};

/// Background rates, influence matrix and kernels of a D-node network.
struct ModelParams {
  Eigen::VectorXd mu;
  Eigen::MatrixXd alpha;
  KernelGrid kernels;

  ModelParams(Eigen::VectorXd mu, Eigen::MatrixXd alpha, KernelGrid kernels);

  int node_count() const noexcept { return static_cast<int>(mu.size()); }

  /// alpha_ij * mass(phi_ij).
  Eigen::MatrixXd branching_matrix() const;
  double branching_radius() const;
  /// True when the branching radius is >= 1 (non-stationary / explosive).
  bool explosive() const { return branching_radius() >= 1.0; }
};

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace hawkes
