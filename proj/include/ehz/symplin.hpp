#pragma once

// Symplectic linear algebra on R^{2n} with coordinates (q_1..q_n, p_1..p_n).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "ehz/errors.hpp"

namespace ehz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// J = [[0, -I_n], [I_n, 0]].
inline Matrix standard_J(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "half-dimension must be >= 1");
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return J;
}

/// Apply J without forming it: J(q, p) = (-p, q).
inline Vector apply_J(const Vector& z) {
  const Eigen::Index n = z.size() / 2;
  Vector out(z.size());
  out.head(n) = -z.tail(n);
  out.tail(n) = z.head(n);
  return out;
}

/// General matrix exponential (scaling and squaring with a Pade core).
inline Matrix expm(const Matrix& m) { return m.exp(); }

/// exp(sJ) = [[cos s I, -sin s I], [sin s I, cos s I]].
inline Matrix exp_sJ(double s, int n) {
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  const double c = std::cos(s);
  const double sn = std::sin(s);
  out.topLeftCorner(n, n).diagonal().setConstant(c);
  out.bottomRightCorner(n, n).diagonal().setConstant(c);
  out.topRightCorner(n, n).diagonal().setConstant(-sn);
  out.bottomLeftCorner(n, n).diagonal().setConstant(sn);
  return out;
}

/// A validated element of Sp(2n, R). Immutable after construction.
class SymplecticMap {
 public:
  static constexpr double kDefaultTol = 1e-9;

  static SymplecticMap make(const Matrix& m, double tol = kDefaultTol) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0)
      throw Error(ErrorCode::DimensionMismatch, "symplectic matrix must be square of even order, got " +
                                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    const int n = static_cast<int>(m.rows() / 2);
    const Matrix J = standard_J(n);
    const double defect = (m.transpose() * J * m - J).cwiseAbs().maxCoeff();
    if (!(defect <= tol))
      throw Error(ErrorCode::NotSymplectic, "|M^t J M - J|_inf = " + std::to_string(defect) + " exceeds " +
                                                std::to_string(tol));
    const double det = m.determinant();
    if (!(std::abs(det - 1.0) <= std::max(tol, 1e-9) * std::max(1.0, m.squaredNorm())))
      throw Error(ErrorCode::NotSymplectic, "det = " + std::to_string(det) + " is not 1");
    return SymplecticMap(m, n, tol);
  }

  static SymplecticMap identity(int n) { return SymplecticMap(Matrix::Identity(2 * n, 2 * n), n, kDefaultTol); }

  /// Rotation by angle s in every symplectic plane, exp(sJ).
  static SymplecticMap rotation(double s, int n = 1) { return SymplecticMap(exp_sJ(s, n), n, kDefaultTol); }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Matrix& matrix() const { return psi_; }
  double tol() const { return tol_; }

  /// Psi^{-1} = -J Psi^t J.
  Matrix inverse() const {
    const Matrix J = standard_J(n_);
    return -J * psi_.transpose() * J;
  }

  double orthogonality_defect() const {
    return (psi_.transpose() * psi_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

  bool is_orthogonal(double tol = 1e-9) const { return orthogonality_defect() <= tol; }

 private:
  SymplecticMap(Matrix m, int n, double tol) : psi_(std::move(m)), n_(n), tol_(tol) {}

  Matrix psi_;
  int n_;
  double tol_;
};

inline SymplecticMap make_symplectic(const Matrix& m, double tol = SymplecticMap::kDefaultTol) {
  return SymplecticMap::make(m, tol);
}

/// E_1 = ker(Psi - I) and its orthogonal complement.
struct FixedSpace {
  Matrix basis_fix;   // 2n x rank_fix, orthonormal columns
  Matrix basis_perp;  // 2n x (2n - rank_fix)
  int rank_fix = 0;

  /// Orthogonal projection onto E_1.
  Vector project(const Vector& z) const {
    if (rank_fix == 0) return Vector::Zero(z.size());
    return basis_fix * (basis_fix.transpose() * z);
  }
};

/// Kernel of Psi - I by singular-value thresholding relative to sigma_max.
inline FixedSpace fixed_space(const SymplecticMap& psi, double rel_tol = 1e-8) {
  const int d = psi.dim();
  const Matrix diff = psi.matrix() - Matrix::Identity(d, d);
  Eigen::JacobiSVD<Matrix> svd(diff, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() ? sv.maxCoeff() : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * smax && smax > 0.0) ++rank;
  FixedSpace fs;
  fs.rank_fix = d - rank;
  // singular values are sorted decreasingly: the trailing columns of V span the kernel
  fs.basis_perp = svd.matrixV().leftCols(rank);
  fs.basis_fix = svd.matrixV().rightCols(d - rank);
  return fs;
}

/// Direct sum S1 (+) S2 with q-blocks first and p-blocks second:
/// [[A1,0,B1,0],[0,A2,0,B2],[C1,0,D1,0],[0,C2,0,D2]].
inline SymplecticMap oplus(const SymplecticMap& s1, const SymplecticMap& s2) {
  const int n1 = s1.n();
  const int n2 = s2.n();
  const int n = n1 + n2;
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  const Matrix& a = s1.matrix();
  const Matrix& b = s2.matrix();
  out.block(0, 0, n1, n1) = a.block(0, 0, n1, n1);
  out.block(0, n, n1, n1) = a.block(0, n1, n1, n1);
  out.block(n, 0, n1, n1) = a.block(n1, 0, n1, n1);
  out.block(n, n, n1, n1) = a.block(n1, n1, n1, n1);
  out.block(n1, n1, n2, n2) = b.block(0, 0, n2, n2);
  out.block(n1, n + n1, n2, n2) = b.block(0, n2, n2, n2);
  out.block(n + n1, n1, n2, n2) = b.block(n2, 0, n2, n2);
  out.block(n + n1, n + n1, n2, n2) = b.block(n2, n2, n2, n2);
  return SymplecticMap::make(out, std::max(s1.tol(), s2.tol()) * 4);
}

/// Orthogonal symplectic matrix [[U, -V], [V, U]] of the unitary U + iV.
inline SymplecticMap from_unitary(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = u.real();
  out.topRightCorner(n, n) = -u.imag();
  out.bottomLeftCorner(n, n) = u.imag();
  out.bottomRightCorner(n, n) = u.real();
  return SymplecticMap::make(out, 1e-8);
}

/// Smallest singular value; used by every zero search in the library.
inline double sigma_min(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace ehz
