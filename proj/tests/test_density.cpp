#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "parapack/density.hpp"

using namespace parapack;

namespace {

const double kPi = std::numbers::pi;
const double kS3 = std::sqrt(3.0);

ConvexBody square() { return ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

ConvexBody hexagon() {
  std::vector<Vec2> v;
  const double r = 2.0 / kS3;
  for (int k = 0; k < 6; ++k) v.emplace_back(r * std::cos(kPi * k / 3.0), r * std::sin(kPi * k / 3.0));
  return ConvexBody::polygon(std::move(v));
}

}  // namespace

TEST(ParametricDensity, SausageOfSevenDiscs) {
  const auto B = ConvexBody::ball(2);
  const auto S = optimal_sausage<2>(B, 7);
  const auto r = parametric_density(B, S, 1.0);
  EXPECT_NEAR(r.value, 7.0 * kPi / (24.0 + kPi), 1e-14);
  EXPECT_EQ(r.n, 7u);
  EXPECT_EQ(r.config_label, "sausage:7");
  ASSERT_TRUE(r.expansion);
  EXPECT_EQ(r.expansion->hull_dim, 1);
}

TEST(ParametricDensity, RejectsOverlapsAndBadRho) {
  const auto B = ConvexBody::ball(2);
  PackingSet<2> C;
  C.points = {{0, 0}, {1, 0}};
  EXPECT_THROW(parametric_density(B, C, 1.0), InvalidPacking);
  C.points[1] = {2, 0};
  EXPECT_THROW(parametric_density(B, C, 0.0), std::invalid_argument);
}

TEST(SausageVolume, MatchesHullComputation) {
  const auto B3 = ConvexBody::ball(3);
  for (int n : {1, 2, 5, 40}) {
    for (double rho : {0.3, 1.0, 2.5}) {
      const double hull = minkowski_volume(optimal_sausage<3>(B3, n), B3, rho).volume;
      EXPECT_NEAR(sausage_volume(B3, n, rho), hull, 1e-11 * hull);
    }
  }
  const auto K = square();
  EXPECT_NEAR(sausage_volume(K, 5, 1.0), minkowski_volume(optimal_sausage<2>(K, 5), K, 1.0).volume, 1e-9);
}

TEST(SausageLimit, DiscAndConvergence) {
  const auto B = ConvexBody::ball(2);
  EXPECT_NEAR(sausage_limit_density(B, 1.0), kPi / 4.0, 1e-15);
  EXPECT_NEAR(sausage_limit_density(B, 2.0), kPi / 8.0, 1e-15);
  const auto c = sausage_density_convergence(B, 1.0, 1000000);
  EXPECT_GT(c.finite, c.limit);
  EXPECT_LT(c.gap, 1e-5);
  EXPECT_NEAR(sausage_limit_density(ConvexBody::ball(3), 1.0), 2.0 / 3.0, 1e-15);
}

TEST(PlanarParameters, KnownBodies) {
  EXPECT_NEAR(planar_parameters(ConvexBody::ball(2)), kS3 / 2.0, 1e-12);
  EXPECT_NEAR(planar_parameters(ConvexBody::ball(2), kPi / (2.0 * kS3)), kS3 / 2.0, 1e-12);
  EXPECT_NEAR(planar_parameters(square(), 1.0), 1.0, 1e-9);
  EXPECT_NEAR(planar_parameters(hexagon(), 1.0), 0.75, 1e-9);
}

TEST(PlanarParameters, Errors) {
  const auto T = ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_THROW(planar_parameters(T, 2.0 / 3.0), std::invalid_argument);
  EXPECT_THROW(planar_parameters(square()), std::invalid_argument);
  EXPECT_THROW(planar_parameters(ConvexBody::ball(3)), std::invalid_argument);
  EXPECT_THROW(planar_parameters(square(), 0.5), InconsistencyError);
}

TEST(PlanarUpperBound, TieAtSevenDiscs) {
  const double d = kPi / (2.0 * kS3);
  const double rho = kS3 / 2.0;
  const double bound = planar_upper_bound(d, 7, rho);
  const double saus = 7.0 * kPi / (24.0 * rho + kPi * rho * rho);
  EXPECT_NEAR(bound, saus, 1e-12);
}

TEST(BoundReport, EntriesAndConditions) {
  const auto r = bound_report(3, BodyClass::Ball);
  EXPECT_FALSE(r.sausage_conjecture_proven);
  ASSERT_NE(r.find("rho_c_upper"), nullptr);
  EXPECT_DOUBLE_EQ(r.find("rho_c_upper")->value, 2.0);
  EXPECT_NEAR(r.find("lattice_rho_c_upper")->value, std::sqrt(21.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.find("rho_s_lower")->value, 1.0 / 96.0, 1e-15);
  EXPECT_NEAR(r.find("ball_volume_ratio")->value, 4.0 / 3.0, 1e-14);
  EXPECT_NE(r.find("symmetric_density_lower"), nullptr);

  const auto g = bound_report(5, BodyClass::General);
  EXPECT_DOUBLE_EQ(g.find("rho_c_upper")->value, 6.0);
  EXPECT_DOUBLE_EQ(g.find("lattice_rho_c_upper")->value, 9.0);
  EXPECT_EQ(g.find("symmetric_density_lower"), nullptr);
  EXPECT_TRUE(bound_report(42, BodyClass::Ball).sausage_conjecture_proven);
  EXPECT_THROW(bound_report(1, BodyClass::Ball), std::invalid_argument);
  EXPECT_THROW(bound_report(3, BodyClass::Ball, 0.5), std::invalid_argument);
}

TEST(BoundReport, VolumeRatioEstimatesBracketTheRatio) {
  for (int d = 2; d <= 60; ++d) {
    const auto r = bound_report(d, BodyClass::Ball);
    const double v = r.find("ball_volume_ratio")->value;
    EXPECT_LT(r.find("ball_volume_ratio_lower")->value, v) << d;
    EXPECT_GT(r.find("ball_volume_ratio_upper")->value, v) << d;
    EXPECT_LE(r.find("ball_density_lower_from_rho_c")->value, 1.0);
  }
}

TEST(DifferenceBodyRatio, SymmetricAndSimplex) {
  EXPECT_DOUBLE_EQ(difference_body_ratio(square()), 2.0);
  EXPECT_NEAR(difference_body_ratio(ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}})), 3.0, 1e-12);
  const auto tet = ConvexBody::polytope3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_NEAR(difference_body_ratio(tet), 4.0, 1e-12);
}
