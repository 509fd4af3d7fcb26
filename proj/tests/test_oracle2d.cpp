#include <numbers>

#include <gtest/gtest.h>

#include "common.hpp"
#include "ehz/oracle2d.hpp"
#include "ehz/verify.hpp"

using namespace ehz;
constexpr double kPi = std::numbers::pi;

namespace {
Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST(Oracle2d, DiscIsHalfTheta) {
  const ConvexBody disc = ConvexBody::ball(2, 1.0);
  for (double th : {kPi / 3, kPi / 2, kPi, 1.5 * kPi, kTwoPi})
    EXPECT_NEAR(arc_capacity_2d(disc, th).value, th / 2.0, 1e-5) << th;
}

TEST(Oracle2d, FullTurnIsArea) {
  EXPECT_NEAR(arc_capacity_2d(ConvexBody::ellipsoid_axes(v2(1, 2)), kTwoPi).value, 2.0 * kPi, 1e-5);
  EXPECT_NEAR(arc_capacity_2d(ConvexBody::box(v2(1, 1)), kTwoPi).value, 4.0, 1e-12);
}

TEST(Oracle2d, PolylineAreaIsShoelace) {
  Matrix v(2, 5);
  v << 1, 0.3, -1, -0.5, 0.7, 0, 1, 0.4, -1, -0.8;
  const BoundaryPolyline pl = boundary_polyline(ConvexBody::polytope(v));
  double shoelace = 0.0;
  for (int i = 0; i < 5; ++i) {
    const int j = (i + 1) % 5;
    shoelace += 0.5 * (v(0, i) * v(1, j) - v(1, i) * v(0, j));
  }
  EXPECT_NEAR(pl.area(), std::abs(shoelace), 1e-12);
  EXPECT_EQ(pl.size(), 5);
}

TEST(Oracle2d, SquareHalfTurnSweepsHalfTheArea) {
  EXPECT_NEAR(arc_capacity_2d(ConvexBody::box(v2(1, 1)), kPi).value, 2.0, 1e-9);
}

TEST(Oracle2d, RotationInvariance) {
  Rng rng(17);
  const ConvexBody p = random_rounded_polygon(rng);
  const Matrix r = test::rotation2(0.37);
  // rotate the body by transforming its vertices
  const ConvexBody::Node& n = p.node();
  const ConvexBody rot = ConvexBody::polytope(r * n.left->vertices).rounded(n.epsilon);
  for (double th : {kPi / 2, kPi})
    EXPECT_NEAR(arc_capacity_2d(p, th).value, arc_capacity_2d(rot, th).value, 1e-4);
}

TEST(Oracle2d, SweptAreaWrapsFullTurns) {
  const BoundaryPolyline pl = boundary_polyline(ConvexBody::box(v2(1, 1)));
  const double phi = 0.3;
  EXPECT_NEAR(pl.swept(phi + kTwoPi) - pl.swept(phi), 4.0, 1e-12);
}

TEST(Oracle2d, Errors) {
  EXPECT_THROW(arc_capacity_2d(ConvexBody::ball(2, 1.0), 0.0), Error);
  EXPECT_THROW(arc_capacity_2d(ConvexBody::ball(2, 1.0), 7.0), Error);
  try {
    arc_capacity_2d(ConvexBody::ball(1.0, v2(3, 0)), kPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OriginNotInterior);
  }
  try {
    arc_capacity_2d(ConvexBody::ball(4, 1.0), kPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}
