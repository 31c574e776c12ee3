#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "linbandit/geometry.hpp"
#include "support/oracles.hpp"

using namespace linbandit;

namespace {

Matrix square_corners() {
  Matrix pts(2, 4);
  pts << 1, -1, -1, 1,
         1, 1, -1, -1;
  return pts / std::sqrt(2.0);
}

}  // namespace

// =============================================================================
// Construction
// =============================================================================

TEST(ArmSet, BallRadii) {
  const auto ball = ArmSet::unit_ball(4);
  EXPECT_EQ(ball.kind(), ArmSetKind::UnitBall);
  EXPECT_FALSE(ball.is_finite());
  EXPECT_DOUBLE_EQ(ball.inner_radius(), 1.0 / std::sqrt(3.0));

  const auto small = ArmSet::contained_ball(4, 0.5);
  EXPECT_EQ(small.kind(), ArmSetKind::ContainedBall);
  EXPECT_DOUBLE_EQ(small.inner_radius(), 0.5 / std::sqrt(3.0));
  EXPECT_TRUE(small.contains(Vector::Unit(4, 2) * 0.5));
  EXPECT_FALSE(small.contains(Vector::Unit(4, 2) * 0.51));
}

TEST(ArmSet, RejectsBadRadius) {
  EXPECT_THROW(ArmSet::contained_ball(3, 0.0), std::invalid_argument);
  EXPECT_THROW(ArmSet::contained_ball(3, 1.5), std::invalid_argument);
  EXPECT_THROW(ArmSet::unit_ball(0), std::invalid_argument);
}

TEST(ArmSet, CloudPointsInsideUnitBall) {
  const auto cloud = ArmSet::uniform_cloud(5, 300, 42);
  EXPECT_EQ(cloud.size(), 300);
  for (Index j = 0; j < cloud.size(); ++j) EXPECT_LE(cloud.points().col(j).norm(), 1.0);
  for (Index j : cloud.inner_indices()) EXPECT_LE(cloud.points().col(j).norm(), 0.5 + 1e-9);
}

TEST(ArmSet, CloudIsReproducibleFromSeed) {
  EXPECT_EQ(ArmSet::uniform_cloud(3, 50, 7).points(), ArmSet::uniform_cloud(3, 50, 7).points());
  EXPECT_NE(ArmSet::uniform_cloud(3, 50, 7).points(), ArmSet::uniform_cloud(3, 50, 8).points());
}

TEST(ArmSet, CatalogSortsNumericIds) {
  Matrix pts(2, 3);
  pts << 0.1, 0.2, 0.3,
         0.0, 0.0, 0.0;
  const auto set = ArmSet::catalog(pts, {"10", "2", "1"});
  EXPECT_EQ(set.ids(), (std::vector<std::string>{"1", "2", "10"}));
  EXPECT_DOUBLE_EQ(set.points()(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(set.points()(0, 2), 0.1);
  EXPECT_EQ(set.item(2).id.value(), "10");
}

TEST(ArmSet, CatalogSortsTextIdsLexically) {
  Matrix pts(1, 3);
  pts << 0.1, 0.2, 0.3;
  const auto set = ArmSet::catalog(pts, {"b", "c", "a"});
  EXPECT_EQ(set.ids(), (std::vector<std::string>{"a", "b", "c"}));
}

// =============================================================================
// best_arm
// =============================================================================

TEST(BestArm, SquareCornerFavoursFirstQuadrant) {
  const auto set = ArmSet::finite(square_corners());
  const Arm a = best_arm(set, Vector::Ones(2), Subset::Full);
  EXPECT_EQ(a.index.value(), 0);
}

TEST(BestArm, TiesGoToLowestIndex) {
  const auto set = ArmSet::finite(square_corners());
  Vector up(2);
  up << 0, 1;
  EXPECT_EQ(best_arm(set, up, Subset::Full).index.value(), 0);
}

TEST(BestArm, ZeroDirectionMeansFirstAxis) {
  const auto ball = ArmSet::unit_ball(3);
  const Arm a = best_arm(ball, Vector::Zero(3), Subset::Full);
  EXPECT_EQ(a.vector, Vector::Unit(3, 0));
  const Arm inner = best_arm(ball, Vector::Zero(3), Subset::Inner);
  EXPECT_NEAR(inner.vector[0], 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(BestArm, BallReturnsScaledDirection) {
  const auto ball = ArmSet::contained_ball(3, 0.6);
  Vector d(3);
  d << 3, 0, 4;
  const Arm a = best_arm(ball, d, Subset::Full);
  EXPECT_NEAR(a.vector[0], 0.36, 1e-15);
  EXPECT_NEAR(a.vector[2], 0.48, 1e-15);
}

TEST(BestArm, EmptyInnerSubsetIsConfigError) {
  const auto set = ArmSet::finite(square_corners(), 0.5);
  EXPECT_TRUE(set.inner_indices().empty());
  EXPECT_THROW(best_arm(set, Vector::Ones(2), Subset::Inner), ConfigError);
}

TEST(BestArmProperty, CloudMatchesBruteForce) {
  const auto cloud = ArmSet::uniform_cloud(6, 500, 99);
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const Vector d = uniform_unit_vector(6, rng);
    EXPECT_EQ(best_arm(cloud, d, Subset::Full).index.value(), oracle::brute_argmax(cloud.points(), d));
  }
}

// =============================================================================
// Exploration kernels
// =============================================================================

TEST(BallKernel, NormIdentityAndOrthogonality) {
  const auto ball = ArmSet::unit_ball(8);
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const Arm c = best_arm(ball, uniform_unit_vector(8, rng), Subset::Inner);
    const Arm z = sample_exploration(ball, c, rng);
    const Vector dz = z.vector - c.vector;
    EXPECT_NEAR(dz.dot(c.vector), 0.0, 1e-12);
    EXPECT_LE(z.vector.norm(), 1.0 + 1e-12);
    EXPECT_LE(dz.norm(), std::sqrt(2.0 / 3.0) + 1e-12);
  }
}

TEST(CloudKernel, SymmetricNeighboursGetEqualWeights) {
  // Cross-polytope around the origin: ubar = 0 so every weight is 1/n.
  const Index p = 3;
  Matrix pts(p, 2 * p * 2 + 1);
  pts.setZero();
  Index col = 1;
  for (double r : {0.2, 0.4})
    for (Index i = 0; i < p; ++i) {
      pts(i, col++) = r;
      pts(i, col++) = -r;
    }
  const auto set = ArmSet::finite(pts, 1.0, 0.5);
  const Kernel k = cloud_kernel(set, set.item(0), 0.5);
  ASSERT_EQ(k.indices.size(), 12u);
  for (double w : k.weights) EXPECT_NEAR(w, 1.0 / 12.0, 1e-14);
  EXPECT_FALSE(k.fallback);
}

TEST(CloudKernel, ExcludesCentreItself) {
  const auto cloud = ArmSet::uniform_cloud(3, 2000, 5);
  const Arm c = best_arm(cloud, Vector::Unit(3, 0), Subset::Inner);
  const Kernel k = cloud_kernel(cloud, c, 0.5);
  for (Index j : k.indices) EXPECT_NE(j, c.index.value());
}

TEST(CloudKernel, TooFewNeighboursIsInfeasible) {
  const auto set = ArmSet::finite(square_corners(), 1.0, 0.5);
  EXPECT_THROW(cloud_kernel(set, set.item(0), 0.5), KernelInfeasible);
  EXPECT_EQ(kernel_min_neighbors(3), 8);
  EXPECT_EQ(kernel_min_neighbors(30), 32);
}

TEST(CloudKernel, CentreOutsideHullFallsBackToUniform) {
  // All neighbours on one side of the centre along e_1.
  Matrix pts = Matrix::Zero(2, 11);
  for (Index j = 1; j < 11; ++j) {
    pts(0, j) = 0.05 * static_cast<double>(j % 3 + 1);
    pts(1, j) = 0.03 * static_cast<double>(j) - 0.15;
  }
  const auto set = ArmSet::finite(pts, 1.0, 0.5);
  const Kernel k = cloud_kernel(set, set.item(0), 0.5);
  EXPECT_TRUE(k.fallback);
  for (double w : k.weights) EXPECT_DOUBLE_EQ(w, 0.1);
}

TEST(CloudKernelProperty, MatchesMinimumNormMomentWeights) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cloud = ArmSet::uniform_cloud(4, 1500, seed);
    Rng rng(seed);
    const Arm c = best_arm(cloud, uniform_unit_vector(4, rng), Subset::Inner);
    const Kernel k = cloud_kernel(cloud, c, 0.5);
    Matrix v(4, static_cast<Index>(k.indices.size()));
    for (std::size_t j = 0; j < k.indices.size(); ++j) v.col(static_cast<Index>(j)) = cloud.points().col(k.indices[j]);
    const auto w = oracle::min_norm_weights(v, c.vector);

    Vector first = Vector::Zero(4);
    double total = 0.0;
    for (std::size_t j = 0; j < k.indices.size(); ++j) {
      total += k.weights[j];
      first += k.weights[j] * v.col(static_cast<Index>(j));
      if (!k.fallback) EXPECT_NEAR(k.weights[j], static_cast<double>(w[j]), 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    if (!k.fallback) EXPECT_LE((first - c.vector).norm(), 1e-10);
  }
}

// =============================================================================
// Assumption probes
// =============================================================================

TEST(VerifyAssumption, BallConstantsAreAnalytic) {
  Rng rng(8);
  for (double rho : {1.0, 0.5}) {
    const auto ball = ArmSet::contained_ball(6, rho);
    const auto cert = verify_assumption(ball, 200, rng);
    EXPECT_NEAR(cert.kappa_est, rho / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(cert.gamma_est, 2.0 * rho * rho / 3.0, 1e-12);
  }
}

TEST(VerifyAssumption, SegmentHasNoSecondMomentInOrthogonalDirection) {
  Matrix pts = Matrix::Zero(2, 41);
  for (Index j = 0; j < 41; ++j) pts(0, j) = -1.0 + 0.05 * static_cast<double>(j);
  const auto set = ArmSet::finite(pts, 1.0, 0.5);
  Rng rng(2);
  const auto cert = verify_assumption(set, 50, rng);
  EXPECT_EQ(cert.gamma_est, 0.0);
}

TEST(VerifyAssumption, DenseCloudHasPositiveConstants) {
  const auto cloud = ArmSet::uniform_cloud(5, 4000, 17);
  Rng rng(4);
  const auto cert = verify_assumption(cloud, 40, rng);
  EXPECT_GT(cert.kappa_est, 0.3);
  EXPECT_LE(cert.kappa_est, 0.5 + 1e-9);
  EXPECT_GT(cert.gamma_est, 0.0);
  EXPECT_EQ(cert.centers_probed, 40);
}

TEST(SupportMin, SquareAndSimplex) {
  Rng rng(12);
  Matrix dirs(2, 2000);
  for (Index k = 0; k < dirs.cols(); ++k) dirs.col(k) = uniform_unit_vector(2, rng);

  // Square inscribed in the unit circle: support minimum is at the edge midpoints.
  const auto square = ArmSet::finite(square_corners());
  const double ks = support_min(square, dirs);
  EXPECT_GE(ks, 1.0 / std::sqrt(2.0) - 1e-12);
  EXPECT_NEAR(ks, 1.0 / std::sqrt(2.0), 1e-3);

  // Equilateral triangle inscribed in the unit circle: inradius 1/2.
  Matrix tri(2, 3);
  for (Index j = 0; j < 3; ++j) {
    const double a = 2.0 * M_PI * static_cast<double>(j) / 3.0;
    tri(0, j) = std::cos(a);
    tri(1, j) = std::sin(a);
  }
  const double kt = support_min(ArmSet::finite(tri), dirs);
  EXPECT_GE(kt, 0.5 - 1e-12);
  EXPECT_NEAR(kt, 0.5, 1e-3);
}

TEST(SupportMin, OneSidedSetIsNegative) {
  Matrix pts(2, 1);
  pts << 0.5, 0.0;
  Matrix dirs(2, 1);
  dirs << -1.0, 0.0;
  EXPECT_DOUBLE_EQ(support_min(ArmSet::finite(pts), dirs), -0.5);
}
