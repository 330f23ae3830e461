#include <gtest/gtest.h>

#include <random>

#include "hawkes/error.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/simulate.hpp"
#include "support.hpp"

namespace hawkes {
namespace {

using namespace testing_support;

struct Instance {
  ModelParams params;
  EventSequence seq;
};

Instance random_instance(std::uint64_t seed, const KernelGrid& grid, double horizon = 50.0,
                         bool simulated = true) {
  std::mt19937_64 rng(seed);
  const int d = grid.node_count();
  ModelParams p(random_vector(rng, d, 0.3, 1.0), random_influence(rng, d, 0.5), grid);
  EventSequence seq = simulated ? simulate(p, horizon, seed) : random_events(rng, d, horizon, 1.0);
  return {std::move(p), std::move(seq)};
}

double brute_loglik(const ModelParams& p, const EventSequence& seq, int i) {
  std::vector<double> cuts(seq.times().begin(), seq.times().end());
  double ll = -piecewise_quadrature([&](double t) { return brute_intensity(p, seq, i, t); }, 0.0,
                                    seq.horizon(), cuts, 8);
  for (double t : seq.node_times(i)) ll += std::log(brute_intensity(p, seq, i, t));
  return ll;
}

TEST(Likelihood, LoglikMatchesBruteForce) {
  const KernelGrid grids[] = {KernelGrid(3, Exponential{1.3}),
                              KernelGrid(2, {GammaKernel{2.0, 2.0}, Gaussian{1.0, 0.5, 1.0},
                                             Exponential{0.8}, GammaKernel{0.7, 1.5}})};
  for (const auto& grid : grids) {
    const Instance inst = random_instance(4, grid, 30.0, false);
    for (int i = 0; i < grid.node_count(); ++i) {
      const NodeData data(inst.seq, i, grid.row(i));
      const double ll = loglik(data, inst.params.mu(i), inst.params.alpha.row(i).transpose());
      EXPECT_NEAR(ll, brute_loglik(inst.params, inst.seq, i), 1e-8 * (1.0 + std::abs(ll)));
    }
  }
}

TEST(Likelihood, ScoreAndHessianMatchFiniteDifferences) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = random_instance(100 + s, KernelGrid(3, Exponential{1.0}));
    const NodeData data(inst.seq, 1, inst.params.kernels.row(1));
    const double mu = inst.params.mu(1);
    const Eigen::VectorXd a = inst.params.alpha.row(1).transpose();
    const Eigen::VectorXd g = score(data, mu, a);
    const Eigen::MatrixXd h = hessian(data, mu, a);
    for (int j = 0; j < 3; ++j) {
      const double step = 1e-5;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
      e(j) = step;
      const double fd = (loglik(data, mu, a + e) - loglik(data, mu, a - e)) / (2 * step);
      EXPECT_NEAR(g(j), fd, 1e-6 * (1.0 + std::abs(fd)));
      const Eigen::VectorXd col = (score(data, mu, a + e) - score(data, mu, a - e)) / (2 * step);
      EXPECT_LT((h.col(j) - col).norm(), 1e-5 * (1.0 + col.norm()));
    }
  }
}

TEST(Likelihood, HessianIsNegativeSemidefinite) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = random_instance(200 + s, KernelGrid(3, Exponential{2.0}));
    std::mt19937_64 rng(s);
    for (int i = 0; i < 3; ++i) {
      const NodeData data(inst.seq, i, inst.params.kernels.row(i));
      const Eigen::MatrixXd h = hessian(data, inst.params.mu(i), random_vector(rng, 3, 0.0, 2.0));
      EXPECT_LE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().maxCoeff(), 1e-10);
      EXPECT_LT((h - h.transpose()).norm(), 1e-12);
    }
  }
}

TEST(Likelihood, LoglikChangeIsAccurate) {
  const Instance inst = random_instance(7, KernelGrid(2, Exponential{1.0}), 200.0);
  const NodeData data(inst.seq, 0, inst.params.kernels.row(0));
  const Eigen::VectorXd a = inst.params.alpha.row(0).transpose();
  const Eigen::VectorXd step = Eigen::Vector2d(0.01, -0.02);
  EXPECT_NEAR(loglik_change(data, 0.7, a, step), loglik(data, 0.7, a + step) - loglik(data, 0.7, a),
              1e-9);
  // Far below the rounding level of loglik itself the change is still
  // first order: score^T step.
  const Eigen::VectorXd tiny = Eigen::Vector2d(1e-13, 2e-13);
  EXPECT_NEAR(loglik_change(data, 0.7, a, tiny), score(data, 0.7, a).dot(tiny), 1e-22);
}

TEST(Likelihood, FisherEstimates) {
  const Instance inst = random_instance(9, KernelGrid(2, Exponential{1.0}), 100.0);
  const NodeData data(inst.seq, 1, inst.params.kernels.row(1));
  const double mu = inst.params.mu(1);
  const Eigen::VectorXd a = inst.params.alpha.row(1).transpose();
  const FisherEstimate f = empirical_fisher(data, mu, a);
  EXPECT_FALSE(f.singular);
  EXPECT_LT((f.matrix + hessian(data, mu, a) / 100.0).norm(), 1e-12);

  // Adapted estimate at t uses only node events strictly before t.
  const auto times = data.event_times();
  const double t = times[times.size() / 2];
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
  for (std::size_t e = 0; e < times.size() && times[e] < t; ++e) {
    const Eigen::VectorXd eta = brute_eta(inst.seq, inst.params.kernels, 1, times[e]);
    const double lam = mu + a.dot(eta);
    sum += eta * eta.transpose() / (lam * lam);
  }
  EXPECT_LT((adapted_fisher(data, mu, a, t) - sum / t).norm(), 1e-12);
  EXPECT_TRUE(adapted_fisher(data, mu, a, times[0]).isIdentity());
}

TEST(Likelihood, RankDeficiency) {
  EXPECT_TRUE(rank_deficient(Eigen::Matrix2d::Zero()));
  EXPECT_TRUE(rank_deficient((Eigen::Matrix2d() << 1, 1, 1, 1).finished()));
  EXPECT_FALSE(rank_deficient(Eigen::Matrix2d::Identity()));
}

TEST(Likelihood, EmptySequence) {
  const EventSequence seq({}, 10.0, 2);
  const NodeData data(seq, 0, KernelGrid(2, Exponential{1}).row(0));
  EXPECT_NEAR(loglik(data, 0.5, Eigen::Vector2d(0.3, 0.3)), -5.0, 1e-15);
  EXPECT_EQ(score(data, 0.5, Eigen::Vector2d(0.3, 0.3)).norm(), 0.0);
  EXPECT_TRUE(empirical_fisher(data, 0.5, Eigen::Vector2d::Zero()).singular);
}

}  // namespace
}  // namespace hawkes
