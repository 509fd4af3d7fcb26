#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ehz/random.hpp"
#include "ehz/symplin.hpp"

namespace ehz::test {

inline Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// Haar-like random unitary from the QR factorization of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = {rng.normal(), rng.normal()};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

/// A random symplectic matrix: product of shears and an orthogonal factor.
inline Matrix random_symplectic(int n, Rng& rng) {
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = 0.3 * (rng.uniform() - 0.5) + (i == j ? 0.2 : 0.0);
  Matrix shear = Matrix::Identity(2 * n, 2 * n);
  shear.topRightCorner(n, n) = s;
  Matrix lower = Matrix::Identity(2 * n, 2 * n);
  lower.bottomLeftCorner(n, n) = s * 0.5;
  Eigen::MatrixXcd u = random_unitary(n, rng);
  Matrix o(2 * n, 2 * n);
  o << u.real(), -u.imag(), u.imag(), u.real();
  return shear * o * lower;
}

}  // namespace ehz::test
