#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "parapack/packing.hpp"

using namespace parapack;

namespace {

ConvexBody square() { return ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

}  // namespace

TEST(Validate, ReportsFirstOverlappingPair) {
  const auto B = ConvexBody::ball(2);
  PackingSet<2> C;
  C.points = {{0, 0}, {2, 0}, {5, 0}, {6.5, 0}};
  const auto v = validate(B, C);
  ASSERT_FALSE(v.valid);
  EXPECT_EQ(v.violation->first, 2u);
  EXPECT_EQ(v.violation->second, 3u);
  EXPECT_NEAR(v.violation->gauge_distance, 1.5, 1e-15);
  try {
    require_packing(B, C);
    FAIL();
  } catch (const InvalidPacking& e) {
    EXPECT_EQ(e.first, 2u);
    EXPECT_EQ(e.second, 3u);
  }
  C.points.pop_back();
  EXPECT_TRUE(validate(B, C).valid);
}

TEST(Validate, TouchingIsAllowedUnderTolerance) {
  const auto K = square();
  PackingSet<2> C;
  C.points = {{0, 0}, {2 - 1e-12, 1.9}};
  EXPECT_TRUE(validate(K, C).valid);
}

TEST(Sausage, ConsecutiveTranslatesTouch) {
  const auto K = ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}});
  const auto u = Direction<2>::from(Vec2(1, 2));
  const auto S = sausage<2>(K, u, 5);
  EXPECT_EQ(S.size(), 5u);
  EXPECT_EQ(S.label, "sausage:5");
  for (std::size_t i = 0; i + 1 < S.size(); ++i) {
    EXPECT_NEAR(gauge_norm<2>(K, Vec2(S.points[i + 1] - S.points[i])), 2.0, 1e-12);
  }
  EXPECT_TRUE(validate(K, S).valid);
  EXPECT_THROW(sausage<2>(K, u, 0), std::invalid_argument);
}

TEST(HexCluster, SpiralPrefixAndSpacing) {
  const auto h7 = hex_cluster(7);
  EXPECT_EQ(h7.label, "hex:7");
  EXPECT_EQ(h7.points.front(), Vec2(0, 0));
  for (std::size_t i = 1; i < 7; ++i) EXPECT_NEAR(h7.points[i].norm(), 2.0, 1e-14);
  const auto h19 = hex_cluster(19);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(h19.points[i], h7.points[i]);
  EXPECT_TRUE(validate(ConvexBody::ball(2), h19).valid);
}

TEST(FccCluster, SiteCenteredBallCutIsCuboctahedron) {
  const auto C = fcc_raw_cluster(13, FccShape::Ball, FccCenter::LatticePoint, 1.0);
  ASSERT_EQ(C.size(), 13u);
  const auto h = hull3d(C.points);
  EXPECT_NEAR(h.volume, 40.0 * std::sqrt(2.0) / 3.0, 1e-11);
  EXPECT_EQ(h.vertices.size(), 12u);
}

TEST(FccCluster, RefinementNeverIncreasesVolume) {
  for (int n : {6, 13, 20, 33}) {
    const auto raw = fcc_raw_cluster(n, FccShape::Ball, FccCenter::LatticePoint, 1.0);
    const auto best = fcc_cluster(n, FccShape::Auto, 1.0);
    EXPECT_EQ(best.size(), static_cast<std::size_t>(n));
    EXPECT_LE(ball3_volume(best.points, 1.0), ball3_volume(raw.points, 1.0) + 1e-9) << n;
    EXPECT_TRUE(validate(ConvexBody::ball(3), best).valid) << n;
  }
}

TEST(FccCluster, SmallClustersAreFullDimensional) {
  const auto four = fcc_cluster(4, FccShape::Auto, 1.0);
  const auto h = hull3d(four.points);
  EXPECT_EQ(h.hull_dim, 3);
  // Regular tetrahedron with edge 2.
  EXPECT_NEAR(h.volume, 8.0 / (6.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_EQ(hull3d(fcc_cluster(3, FccShape::Auto, 1.0).points).hull_dim, 2);
  EXPECT_EQ(hull3d(fcc_cluster(2, FccShape::Auto, 1.0).points).hull_dim, 1);
}

TEST(FccCluster, LabelsNameShapeAndCenter) {
  const auto C = fcc_raw_cluster(10, FccShape::Octahedron, FccCenter::OctahedralHole, 1.0);
  EXPECT_EQ(C.label, "fcc:10:octahedron@" + to_string(FccCenter::OctahedralHole));
  for (auto s : kFccShapes) {
    for (auto c : kFccCenters) {
      const auto K = fcc_raw_cluster(15, s, c, 1.0);
      EXPECT_EQ(K.size(), 15u);
      EXPECT_TRUE(validate(ConvexBody::ball(3), K).valid) << K.label;
    }
  }
}

TEST(Lattice, ClassicalDensities) {
  EXPECT_NEAR(lattice_density<2>(ConvexBody::ball(2), hexagonal_lattice()), std::numbers::pi / (2.0 * std::sqrt(3.0)),
              1e-15);
  EXPECT_NEAR(lattice_density<3>(ConvexBody::ball(3), fcc_lattice()), std::numbers::pi / std::sqrt(18.0), 1e-15);
  EXPECT_NEAR(fcc_lattice().det, 4.0 * std::sqrt(2.0), 1e-14);
}

TEST(Lattice, SquareLatticeTilesSquare) {
  const auto L = Lattice<2>::from_basis(2.0 * Eigen::Matrix2d::Identity());
  EXPECT_DOUBLE_EQ(lattice_density<2>(square(), L), 1.0);
}

TEST(Lattice, RejectsOverlapsAndSingularBases) {
  const auto L = Lattice<2>::from_basis(1.9 * Eigen::Matrix2d::Identity());
  EXPECT_THROW(lattice_density<2>(ConvexBody::ball(2), L), NotAPackingLattice);
  Eigen::Matrix2d skew;
  skew << 2.0, 3.0, 0.0, 0.5;  // b2 - b1 = (1, 0.5) is short
  EXPECT_THROW(lattice_density<2>(ConvexBody::ball(2), Lattice<2>::from_basis(skew)), NotAPackingLattice);
  Eigen::Matrix2d sing;
  sing << 1.0, 2.0, 2.0, 4.0;
  EXPECT_THROW(Lattice<2>::from_basis(sing), std::invalid_argument);
}
