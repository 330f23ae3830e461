#pragma once

#include <Eigen/Dense>

#include "hawkes/params.hpp"

namespace hawkes {

// Closed forms for a stationary network with exponential kernels
// beta e^{-beta t} shared by every pair.  All functions throw NonStationary
// when the spectral radius of A is >= 1.

/// Lambda = (I - A)^{-1} mu, the expected intensity.
Eigen::VectorXd stationary_intensity(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A);

/// E[eta eta^T] under the stationary law (eta built with beta e^{-beta t}).
Eigen::MatrixXd w_matrix(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A, double beta);

/// W / mu_i, which dominates the Fisher information of node i.
Eigen::MatrixXd fisher_upper_bound(double mu_i, const Eigen::MatrixXd& W);

/// Markov bound on P(z^T S_i >= eps_scale sqrt(T)): min(1, z^T W z / (mu_i eps_scale^2)).
double score_tail_bound(const Eigen::VectorXd& z, const Eigen::MatrixXd& W, double mu_i,
                        double eps_scale);

/// Continuous part of the covariance density of dN at lag tau != 0.
Eigen::MatrixXd covariance_density(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                                   double beta, double tau);

struct StationarySummary {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd sigma;  // diag(lambda)
  Eigen::MatrixXd w;
  double spectral_radius = 0.0;
  double beta = 0.0;
};

/// Requires every kernel to be exponential with one shared beta
/// (KernelUnsupported otherwise).
StationarySummary summarize(const ModelParams& params);

}  // namespace hawkes
