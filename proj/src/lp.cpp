#include "hawkes/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hawkes/error.hpp"

namespace hawkes::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-9;

}  // namespace

Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& G_in, const Eigen::VectorXd& h_in) {
  const Eigen::Index n = c.size();
  if (G_in.cols() != n || G_in.rows() != h_in.size())
    throw Error(ErrorCode::InvalidArgument, "LP dimensions do not match");
  if (!c.allFinite() || !G_in.allFinite() || !h_in.allFinite())
    throw Error(ErrorCode::NonFinite, "LP data must be finite");

  // Scale rows, drop empty ones (0 <= h) and detect trivially infeasible rows.
  std::vector<Eigen::Index> keep;
  Result res;
  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < G_in.rows(); ++r) {
    const double scale = G_in.row(r).lpNorm<Eigen::Infinity>();
    if (scale == 0.0) {
      if (h_in(r) < -kFeasTol) {
        res.status = Status::Infeasible;
        return res;
      }
      continue;
    }
    keep.push_back(r);
  }
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd G(m, n);
  Eigen::VectorXd h(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double scale = G_in.row(keep[k]).lpNorm<Eigen::Infinity>();
    G.row(k) = G_in.row(keep[k]) / scale;
    h(k) = h_in(keep[k]) / scale;
  }

  // Columns: x (n), slack (m), artificial (one per negative-rhs row).
  std::vector<Eigen::Index> art_row;
  for (Eigen::Index k = 0; k < m; ++k)
    if (h(k) < 0.0) art_row.push_back(k);
  const Eigen::Index na = static_cast<Eigen::Index>(art_row.size());
  const Eigen::Index cols = n + m + na;
  const Eigen::Index rhs = cols;

  // Rows 0..m-1 constraints, row m real reduced costs, row m+1 the M part.
  // Minimising -c^T x + M * sum(artificials).
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 2, cols + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  Eigen::Index a = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double sign = h(k) < 0.0 ? -1.0 : 1.0;
    tab.block(k, 0, 1, n) = sign * G.row(k);
    tab(k, n + k) = sign;
    tab(k, rhs) = sign * h(k);
    if (sign < 0.0) {
      tab(k, n + m + a) = 1.0;
      basis[k] = n + m + a;
      ++a;
    } else {
      basis[k] = n + k;
    }
  }
  const Eigen::Index cost = m;
  const Eigen::Index big = m + 1;
  tab.block(cost, 0, 1, n) = -c.transpose();
  for (Eigen::Index q = 0; q < na; ++q) {
    tab(big, n + m + q) = 1.0;
    tab.row(big) -= tab.row(art_row[q]);
  }

  auto negative = [&](Eigen::Index col) {
    const double dm = tab(big, col);
    if (dm < -kCostTol) return true;
    if (dm > kCostTol) return false;
    return tab(cost, col) < -kCostTol;
  };

  const int max_pivots = 50 * static_cast<int>(cols + m + 1);
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index col = 0; col < cols; ++col) {
      if (negative(col)) {
        enter = col;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
      const double p = tab(k, enter);
      if (p <= kPivotTol) continue;
      const double ratio = tab(k, rhs) / p;
      if (ratio < best - 1e-14 ||
          (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[k] < basis[leave])) {
        best = ratio;
        leave = k;
      }
    }
    if (leave < 0) {
      // An unbounded ray that still uses artificials means no feasible point
      // was reached yet; otherwise the real objective is unbounded.
      bool artificial_basic = false;
      for (Eigen::Index k = 0; k < m; ++k)
        if (basis[k] >= n + m && tab(k, rhs) > kFeasTol) artificial_basic = true;
      res.status = artificial_basic ? Status::Infeasible : Status::Unbounded;
      return res;
    }

    const double pivot = tab(leave, enter);
    tab.row(leave) /= pivot;
    for (Eigen::Index r = 0; r < m + 2; ++r) {
      if (r == leave) continue;
      const double f = tab(r, enter);
      if (f != 0.0) tab.row(r) -= f * tab.row(leave);
    }
    basis[leave] = enter;
    if (++res.pivots > max_pivots)
      throw Error(ErrorCode::NonFinite, "simplex exceeded its pivot budget");
  }

  for (Eigen::Index k = 0; k < m; ++k) {
    if (basis[k] >= n + m && tab(k, rhs) > kFeasTol) {
      res.status = Status::Infeasible;
      return res;
    }
  }
  for (Eigen::Index k = 0; k < m; ++k)
    if (basis[k] < n) res.x(basis[k]) = std::max(tab(k, rhs), 0.0);
  res.value = c.dot(res.x);
  res.status = Status::Optimal;
  return res;
}

Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  Result r = maximize(-c, G, h);
  r.value = -r.value;
  return r;
}

}  // namespace hawkes::lp
