#include "hawkes/params.hpp"

#include <cmath>
#include <string>

#include "hawkes/error.hpp"

namespace hawkes {

KernelGrid::KernelGrid(int node_count, const KernelSpec& shared)
    : d_(node_count), specs_(static_cast<std::size_t>(node_count) * node_count, shared) {
  if (node_count <= 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
}

KernelGrid::KernelGrid(int node_count, std::vector<KernelSpec> specs)
    : d_(node_count), specs_(std::move(specs)) {
  if (node_count <= 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
  if (specs_.size() != static_cast<std::size_t>(node_count) * node_count)
    throw Error(ErrorCode::InvalidArgument, "kernel grid must hold D*D specs");
}

std::vector<KernelSpec> KernelGrid::row(int target) const {
  if (target < 0 || target >= d_)
    throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(target));
  return {specs_.begin() + target * d_, specs_.begin() + (target + 1) * d_};
}

bool KernelGrid::all_exponential() const noexcept {
  for (const auto& s : specs_)
    if (!s.is_exponential()) return false;
  return true;
}

Eigen::MatrixXd KernelGrid::masses() const {
  Eigen::MatrixXd m(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) m(i, j) = total_mass((*this)(i, j));
  return m;
}

ModelParams::ModelParams(Eigen::VectorXd mu_in, Eigen::MatrixXd alpha_in, KernelGrid kernels_in)
    : mu(std::move(mu_in)), alpha(std::move(alpha_in)), kernels(std::move(kernels_in)) {
  const auto d = mu.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "mu must be non-empty");
  if (alpha.rows() != d || alpha.cols() != d)
    throw Error(ErrorCode::InvalidArgument, "alpha must be D x D");
  if (kernels.node_count() != d) throw Error(ErrorCode::InvalidArgument, "kernel grid must be D x D");
  for (Eigen::Index i = 0; i < d; ++i)
    if (!std::isfinite(mu(i)) || mu(i) <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "mu[" + std::to_string(i) + "] must be > 0");
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (!std::isfinite(alpha(i, j)) || alpha(i, j) < 0.0)
        throw Error(ErrorCode::InvalidArgument,
                    "alpha[" + std::to_string(i) + "][" + std::to_string(j) + "] must be >= 0");
}

Eigen::MatrixXd ModelParams::branching_matrix() const {
  return alpha.cwiseProduct(kernels.masses());
}

double ModelParams::branching_radius() const { return spectral_radius(branching_matrix()); }

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace hawkes
