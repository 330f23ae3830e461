#pragma once

#include <Eigen/Dense>

namespace hawkes::lp {

enum class Status { Optimal, Unbounded, Infeasible };

struct Result {
  Status status = Status::Infeasible;
  double value = 0.0;   // objective at x (meaningful when Optimal)
  Eigen::VectorXd x;
  int pivots = 0;
};

/// maximize c^T x  subject to  G x <= h,  x >= 0.
///
/// Dense tableau simplex.  Rows with negative right-hand side get an
/// artificial variable priced at -M; M is kept symbolic (the objective is a
/// pair compared lexicographically) so no numeric big constant is needed.
/// Bland's rule picks entering and leaving variables, which rules out
/// cycling.  Rows are scaled to unit infinity norm before solving.
Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h);

/// minimize c^T x under the same constraints.
Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h);

}  // namespace hawkes::lp
