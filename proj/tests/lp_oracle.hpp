// Brute-force LP reference for small dimensions: every vertex of
// {x : G x <= h, x >= 0} is the solution of some n active constraints.
#pragma once

#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lp_oracle {

struct Instance {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

inline std::vector<Eigen::VectorXd> vertices(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  const auto n = G.cols();
  const auto m = G.rows();
  Eigen::MatrixXd A(m + n, n);
  Eigen::VectorXd b(m + n);
  A << G, -Eigen::MatrixXd::Identity(n, n);
  b << h, Eigen::VectorXd::Zero(n);
  std::vector<Eigen::VectorXd> out;
  std::vector<int> pick(static_cast<std::size_t>(n));
  const auto total = A.rows();
  // Enumerate n-subsets by nested counters.
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == n) {
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd r(n);
      for (int k = 0; k < n; ++k) {
        M.row(k) = A.row(pick[static_cast<std::size_t>(k)]);
        r(k) = b(pick[static_cast<std::size_t>(k)]);
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(r);
      if (((A * x - b).array() <= 1e-9 * (1.0 + b.array().abs())).all()) out.push_back(x);
      return;
    }
    for (int k = start; k < total; ++k) {
      pick[static_cast<std::size_t>(depth)] = k;
      rec(depth + 1, k + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// [min x_j, max x_j] over a bounded polyhedron, or nullopt when empty.
inline std::optional<std::pair<double, double>> axis_range(const Eigen::MatrixXd& G,
                                                            const Eigen::VectorXd& h,
                                                            Eigen::Index j) {
  const auto v = vertices(G, h);
  if (v.empty()) return std::nullopt;
  double lo = v[0](j), hi = v[0](j);
  for (const auto& x : v) {
    lo = std::min(lo, x(j));
    hi = std::max(hi, x(j));
  }
  return std::pair{lo, hi};
}

/// Polyhedron shaped like a linearised confidence set: random half-spaces
/// around a centre in the orthant, plus one all-positive row that keeps it
/// bounded.  Negative slack on some rows makes a share of them empty.
inline Instance random_polyhedron(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  const int n = dim(rng);
  const int rows = 2 * n + 1;
  Instance inst;
  inst.G.resize(rows, n);
  inst.h.resize(rows);
  Eigen::VectorXd centre(n);
  for (int k = 0; k < n; ++k) centre(k) = u(rng) < 0.3 ? 0.0 : u(rng);
  const bool empty = u(rng) < 0.15;
  for (int r = 0; r < rows - 1; ++r) {
    for (int k = 0; k < n; ++k) inst.G(r, k) = z(rng) * (u(rng) < 0.1 ? 100.0 : 1.0);
    const double slack = empty && r == 0 ? -0.5 - u(rng) : 0.05 + u(rng);
    inst.h(r) = inst.G.row(r).dot(centre) + slack * inst.G.row(r).norm();
  }
  if (empty) {
    // Opposite half-space to row 0 shifted past it.
    inst.G.row(1) = -inst.G.row(0);
    inst.h(1) = -inst.h(0) - 0.5 * inst.G.row(0).norm();
  }
  for (int k = 0; k < n; ++k) inst.G(rows - 1, k) = 0.5 + u(rng);
  inst.h(rows - 1) = inst.G.row(rows - 1).dot(centre) + 1.0 + 3.0 * u(rng);
  return inst;
}

}  // namespace lp_oracle
