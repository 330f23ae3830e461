#include "hawkes/asymptotic.hpp"

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/special.hpp"

namespace hawkes {

double normal_quantile(double p) { return special::normal_quantile(p); }

double bonferroni_z(double epsilon, int d) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1)");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "D must be >= 1");
  return normal_quantile(1.0 - epsilon / (2.0 * d));
}

ConfidenceReport asymptotic_ci(const Eigen::VectorXd& alpha_hat, const Eigen::MatrixXd& fisher,
                               double horizon, double epsilon, int d, int node) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  const auto n = alpha_hat.size();
  if (fisher.rows() != n || fisher.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "fisher must be D x D");
  const double z = bonferroni_z(epsilon, d);

  const Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (fisher + fisher.transpose()));
  if (llt.info() != Eigen::Success || !fisher.allFinite())
    throw Error(ErrorCode::SingularFisher, "empirical Fisher information is not positive definite");
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!cov.allFinite() || (cov.diagonal().array() <= 0.0).any())
    throw Error(ErrorCode::SingularFisher, "inverse Fisher information is not usable");

  ConfidenceReport r;
  r.method = CiMethod::Asymptotic;
  r.epsilon = epsilon;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double half = z * std::sqrt(cov(j, j) / horizon);
    EntryInterval e;
    e.i = node;
    e.j = static_cast<int>(j);
    e.point = alpha_hat(j);
    e.lo = alpha_hat(j) - half;
    e.hi = alpha_hat(j) + half;
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace hawkes
