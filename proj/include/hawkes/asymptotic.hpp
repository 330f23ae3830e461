#pragma once

#include <Eigen/Dense>

#include "hawkes/report.hpp"

namespace hawkes {

/// Phi^{-1}(p) for 0 < p < 1.
double normal_quantile(double p);

/// Bonferroni-adjusted two-sided critical value Z_{eps/2D}: Phi(Z) = 1 - eps/(2D).
double bonferroni_z(double epsilon, int d);

/// Per-entry intervals alpha_hat_j +/- Z_{eps/2D} sqrt(sigma_jj / T), with
/// sigma the inverse of `fisher`.  Lower bounds are reported unclipped.
/// Throws SingularFisher when `fisher` is not positive definite.
ConfidenceReport asymptotic_ci(const Eigen::VectorXd& alpha_hat, const Eigen::MatrixXd& fisher,
                               double horizon, double epsilon, int d, int node = 0);

}  // namespace hawkes
