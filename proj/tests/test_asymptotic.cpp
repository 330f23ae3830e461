#include <gtest/gtest.h>

#include <cmath>

#include "hawkes/asymptotic.hpp"
#include "hawkes/error.hpp"

namespace hawkes {
namespace {

TEST(Asymptotic, BonferroniCriticalValues) {
  EXPECT_NEAR(bonferroni_z(0.05, 1), 1.959963984540054, 1e-12);
  EXPECT_NEAR(bonferroni_z(0.05, 3), 2.3939797998185108, 1e-12);
  EXPECT_THROW(bonferroni_z(0.0, 1), Error);
  EXPECT_THROW(bonferroni_z(0.5, 0), Error);
}

TEST(Asymptotic, IdentityFisherSingleNode) {
  const auto r = asymptotic_ci(Eigen::VectorXd::Constant(1, 0.4), Eigen::MatrixXd::Identity(1, 1),
                               100.0, 0.05, 1);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_NEAR(r.entries[0].lo, 0.4 - 0.1959963984540054, 1e-13);
  EXPECT_NEAR(r.entries[0].hi, 0.4 + 0.1959963984540054, 1e-13);
  EXPECT_EQ(r.method, CiMethod::Asymptotic);
}

TEST(Asymptotic, UsesDiagonalOfInverse) {
  Eigen::Matrix2d f;
  f << 2.0, 0.5, 0.5, 1.0;
  const Eigen::Matrix2d inv = f.inverse();
  const auto r = asymptotic_ci(Eigen::Vector2d(0.0, 1.0), f, 50.0, 0.1, 2, 4);
  const double z = bonferroni_z(0.1, 2);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(r.entries[j].width(), 2.0 * z * std::sqrt(inv(j, j) / 50.0), 1e-13);
    EXPECT_EQ(r.entries[j].i, 4);
  }
  // Raw lower bound is negative at a zero estimate; clipping is a view.
  EXPECT_LT(r.entries[0].lo, 0.0);
  EXPECT_EQ(r.entries[0].lo_clipped(), 0.0);
}

TEST(Asymptotic, SingularFisher) {
  try {
    asymptotic_ci(Eigen::Vector2d(0, 0), Eigen::Matrix2d::Constant(1.0), 10.0, 0.05, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularFisher);
  }
}

TEST(Report, MergeFindAndMatrices) {
  ConfidenceReport a, b;
  a.entries.push_back({0, 0, 0.1, 0.0, 0.2});
  b.entries.push_back({1, 0, 0.3, 0.1, 0.5});
  b.flags.unbounded = true;
  b.flags.dropped_rows = 2;
  a.merge(b);
  EXPECT_TRUE(a.flags.unbounded);
  EXPECT_EQ(a.flags.dropped_rows, 2);
  ASSERT_NE(a.find(1, 0), nullptr);
  EXPECT_EQ(a.find(0, 1), nullptr);
  const Eigen::MatrixXd hi = a.upper(2);
  EXPECT_EQ(hi(1, 0), 0.5);
  EXPECT_TRUE(std::isnan(hi(1, 1)));
  EXPECT_EQ(ci_method_from_string("concentration"), CiMethod::Concentration);
  EXPECT_THROW(ci_method_from_string("other"), Error);
}

}  // namespace
}  // namespace hawkes
