#include <numbers>

#include <gtest/gtest.h>

#include "common.hpp"
#include "ehz/closedform.hpp"

using namespace ehz;
constexpr double kPi = std::numbers::pi;

namespace {
Matrix ball_S(int n, double r) { return Matrix::Identity(2 * n, 2 * n) * (2.0 / (r * r)); }

// E(r_1, ..., r_n): radius r_i in the (q_i, p_i) plane
Matrix symplectic_ellipsoid(const std::vector<double>& r) {
  const int n = static_cast<int>(r.size());
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) s(i, i) = s(n + i, n + i) = 2.0 / (r[i] * r[i]);
  return s;
}
}  // namespace

TEST(ClosedForm, Ball) {
  EXPECT_NEAR(capacity_ball(SymplecticMap::identity(1)).value, kPi, 1e-9);
  EXPECT_NEAR(capacity_ball(SymplecticMap::make(-Matrix::Identity(2, 2))).value, kPi / 2, 1e-9);
  EXPECT_NEAR(capacity_ball(SymplecticMap::rotation(kPi / 3), 2.0).value, 4.0 * kPi / 6, 1e-9);
  EXPECT_THROW(capacity_ball(SymplecticMap::identity(1), 0.0), Error);
}

TEST(ClosedForm, EllipsoidMatchesBall) {
  for (int n : {1, 2}) {
    for (double th : {kPi / 3, kPi, kTwoPi}) {
      const auto psi = SymplecticMap::rotation(th, n);
      EXPECT_NEAR(capacity_ellipsoid(psi, ball_S(n, 1.3)).value, capacity_ball(psi, 1.3).value, 1e-8);
    }
  }
}

TEST(ClosedForm, EllipsoidIdentityIsPiRminSquared) {
  Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<double> r(n);
    for (double& x : r) x = rng.uniform(0.5, 2.0);
    const double rmin = *std::min_element(r.begin(), r.end());
    EXPECT_NEAR(capacity_ellipsoid(SymplecticMap::identity(n), symplectic_ellipsoid(r)).value, kPi * rmin * rmin,
                1e-8);
  }
}

TEST(ClosedForm, EllipsoidCarrierLiesOnBoundaryAndCloses) {
  const auto psi = SymplecticMap::rotation(1.0, 2);
  const Matrix s = symplectic_ellipsoid({1.0, 1.5});
  const CapacityResult r = capacity_ellipsoid(psi, s);
  ASSERT_TRUE(r.carrier);
  EXPECT_LT(r.carrier->boundary_residual, 1e-10);
  EXPECT_LT(r.carrier->closure_residual, 1e-8);
}

TEST(ClosedForm, EllipsoidRejectsIndefinite) {
  Matrix s = Matrix::Identity(2, 2);
  s(1, 1) = -1.0;
  EXPECT_THROW(capacity_ellipsoid(SymplecticMap::identity(1), s), Error);
}

TEST(ClosedForm, SymplecticFrequencies) {
  const auto w = symplectic_frequencies(symplectic_ellipsoid({1.0, 2.0}));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 0.5, 1e-12);
  EXPECT_NEAR(w[1], 2.0, 1e-12);
}

TEST(ClosedForm, ProductTakesMinimumAndListsTies) {
  using Factor = std::pair<SymplecticMap, double>;
  const std::vector<Factor> f = {{SymplecticMap::identity(1), 1.0}, {SymplecticMap::identity(1), 1.0},
                                 {SymplecticMap::identity(1), 2.0}};
  const CapacityResult r =
      capacity_product(std::span<const Factor>(f), [](const SymplecticMap& p, double rad) { return capacity_ball(p, rad); });
  EXPECT_NEAR(r.value, kPi, 1e-9);
  EXPECT_EQ(r.diagnostics.at("argmin_count"), 2.0);
}

TEST(ClosedForm, OrthogonalCylinder) {
  EXPECT_NEAR(capacity_orth_cylinder(SymplecticMap::rotation(kPi / 2, 2)).value, kPi / 4, 1e-9);
  Matrix shear = Matrix::Identity(2, 2);
  shear(0, 1) = 1.0;
  try {
    capacity_orth_cylinder(SymplecticMap::make(shear));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOrthogonal);
  }
}
