#include "hawkes/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include <unsupported/Eigen/MatrixFunctions>

#include "hawkes/error.hpp"

namespace hawkes {

namespace {

void check_stationary(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() != mu.size())
    throw Error(ErrorCode::InvalidArgument, "A must be D x D with D = size of mu");
  if (!(spectral_radius(A) < 1.0))
    throw Error(ErrorCode::NonStationary, "spectral radius of A must be < 1");
}

Eigen::MatrixXd resolvent(const Eigen::MatrixXd& A) {
  const auto d = A.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  return (eye - A).partialPivLu().solve(eye);
}

}  // namespace

Eigen::VectorXd stationary_intensity(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A) {
  check_stationary(mu, A);
  const auto d = A.rows();
  return (Eigen::MatrixXd::Identity(d, d) - A).partialPivLu().solve(mu);
}

Eigen::MatrixXd w_matrix(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A, double beta) {
  check_stationary(mu, A);
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be > 0");
  const Eigen::VectorXd lambda = stationary_intensity(mu, A);
  const Eigen::MatrixXd sigma = lambda.asDiagonal();
  const Eigen::MatrixXd cross = A * resolvent(A) * sigma;
  Eigen::MatrixXd w = lambda * lambda.transpose() + 0.5 * beta * sigma +
                      0.25 * beta * (cross + cross.transpose());
  return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd fisher_upper_bound(double mu_i, const Eigen::MatrixXd& W) {
  if (!(mu_i > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_i must be > 0");
  return W / mu_i;
}

double score_tail_bound(const Eigen::VectorXd& z, const Eigen::MatrixXd& W, double mu_i,
                        double eps_scale) {
  if (!(mu_i > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_i must be > 0");
  if (!(eps_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_scale must be > 0");
  if (z.size() != W.rows()) throw Error(ErrorCode::InvalidArgument, "z must have D entries");
  const double q = z.dot(W * z);
  return std::min(1.0, q / (mu_i * eps_scale * eps_scale));
}

Eigen::MatrixXd covariance_density(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                                   double beta, double tau) {
  check_stationary(mu, A);
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be > 0");
  if (tau == 0.0 || !std::isfinite(tau))
    throw Error(ErrorCode::InvalidArgument, "tau must be finite and non-zero");
  const auto d = A.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd sigma = stationary_intensity(mu, A).asDiagonal();
  const Eigen::MatrixXd decay = (-beta * std::abs(tau) * (eye - A)).exp();
  const Eigen::MatrixXd c = beta * decay * A * (eye + 0.5 * resolvent(A) * A) * sigma;
  return tau > 0.0 ? c : Eigen::MatrixXd(c.transpose());
}

StationarySummary summarize(const ModelParams& params) {
  const int d = params.node_count();
  double beta = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto* e = std::get_if<Exponential>(&params.kernels(i, j).variant());
      if (!e) throw Error(ErrorCode::KernelUnsupported, "closed forms need exponential kernels");
      if (i == 0 && j == 0)
        beta = e->beta;
      else if (e->beta != beta)
        throw Error(ErrorCode::KernelUnsupported, "closed forms need one shared beta");
    }
  }
  StationarySummary s;
  s.beta = beta;
  s.spectral_radius = spectral_radius(params.alpha);
  s.lambda = stationary_intensity(params.mu, params.alpha);
  s.sigma = s.lambda.asDiagonal();
  s.w = w_matrix(params.mu, params.alpha, beta);
  return s;
}

}  // namespace hawkes
