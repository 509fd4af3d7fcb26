#pragma once

// Zeros of g(s) = det(Psi - exp(sJ)), the minimal characteristic time t(Psi),
// and the eigenbasis of -J d/dt on curves with x(1) = Psi x(0).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ehz/symplin.hpp"

namespace ehz {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double g_psi(const SymplecticMap& psi, double s) {
  return (psi.matrix() - exp_sJ(s, psi.n())).determinant();
}

/// det(I + A^{-t} A - cos s (A + A^{-t})), which equals g(s) for Psi_A.
inline double g_psi_A(const Matrix& a, double s) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "A must be square");
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
    throw Error(ErrorCode::SingularMatrix, "A is not invertible");
  const Matrix ait = a.transpose().inverse();
  const Eigen::Index n = a.rows();
  return (Matrix::Identity(n, n) + ait * a - std::cos(s) * (a + ait)).determinant();
}

struct ZeroScanOptions {
  int grid = 4096;             // uniform samples of sigma_min on (0, 2pi]
  double bracket = 1e-12;      // golden-section stopping width
  double accept = 1e-9;        // refined sigma_min must fall below this (times max(1, |Psi|))
  double merge = 1e-6;         // minima closer than this are one zero
  double kernel_tol = 1e-6;    // singular values below this count toward multiplicity
};

struct ZeroSet {
  std::vector<double> zeros;       // sorted, in (0, 2pi]
  std::vector<int> multiplicities; // dim ker(exp(t_l J) - Psi)
};

namespace detail {

inline double sigma_min_at(const SymplecticMap& psi, double s) {
  return sigma_min(psi.matrix() - exp_sJ(s, psi.n()));
}

template <class F>
double golden_minimize(F&& f, double lo, double hi, double width) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

inline double wrap_period(double s) {
  double w = std::fmod(s, kTwoPi);
  if (w <= 1e-10) w += kTwoPi;
  return w;
}

}  // namespace detail

/// All s in (0, 2pi] with det(Psi - exp(sJ)) = 0. Zeros may be tangential
/// (g >= 0 for orthogonal Psi), so the scan minimizes sigma_min instead of
/// bracketing sign changes.
inline ZeroSet zeros_in_period(const SymplecticMap& psi, const ZeroScanOptions& opts = {}) {
  const int k = opts.grid;
  const double h = kTwoPi / k;
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = detail::sigma_min_at(psi, h * (i + 1));

  const double scale = std::max(1.0, psi.matrix().norm());
  std::vector<double> found;
  for (int i = 0; i < k; ++i) {
    const double prev = v[(i + k - 1) % k];
    const double next = v[(i + 1) % k];
    if (!(v[i] <= prev && v[i] <= next)) continue;
    const double center = h * (i + 1);
    const double s = detail::golden_minimize([&](double x) { return detail::sigma_min_at(psi, x); },
                                             center - h, center + h, opts.bracket);
    if (detail::sigma_min_at(psi, s) <= opts.accept * scale) found.push_back(detail::wrap_period(s));
  }
  if (found.empty()) throw Error(ErrorCode::NoZeroFound, "no zero of det(Psi - exp(sJ)) located in (0, 2pi]");

  std::sort(found.begin(), found.end());
  std::vector<double> merged;
  for (double s : found) {
    if (!merged.empty() && s - merged.back() < opts.merge) continue;
    merged.push_back(s);
  }
  // 2pi and a value just above 0 describe the same point of the circle
  if (merged.size() > 1 && merged.front() + kTwoPi - merged.back() < opts.merge) merged.erase(merged.begin());

  ZeroSet zs;
  zs.zeros = merged;
  for (double s : merged) {
    Eigen::JacobiSVD<Matrix> svd(psi.matrix() - exp_sJ(s, psi.n()));
    const Vector& sv = svd.singularValues();
    int mult = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (sv(j) <= opts.kernel_tol * scale) ++mult;
    zs.multiplicities.push_back(std::max(mult, 1));
  }
  return zs;
}

/// Smallest zero of g in (0, 2pi].
inline double t_psi(const SymplecticMap& psi, const ZeroScanOptions& opts = {}) {
  return zeros_in_period(psi, opts).zeros.front();
}

/// One eigenfunction e(t) = exp(lambda t J) X of -J d/dt with e(1) = Psi e(0).
struct Mode {
  double lambda = 0.0;
  Vector seed;        // unit vector X in ker(exp(t_l J) - Psi)
  int zero_index = 0; // which t_l the eigenvalue belongs to

  Vector eval(double t) const {
    const double a = lambda * t;
    return std::cos(a) * seed + std::sin(a) * apply_J(seed);
  }
};

/// Truncated eigenbasis of -J d/dt on {x(1) = Psi x(0)}, ordered by eigenvalue.
/// Constant modes (eigenvalue 0, i.e. E_1) are not included; see FixedSpace.
struct EigenBasis {
  SymplecticMap psi;
  ZeroSet zeros;
  std::vector<Mode> modes;
  double lambda_max = 0.0;

  int size() const { return static_cast<int>(modes.size()); }
  int dim() const { return psi.dim(); }
};

/// Default spectral cutoff: 32 lattice periods per zero family plus one.
inline double default_lambda_max(int periods = 32) { return kTwoPi * periods + kTwoPi; }

inline EigenBasis eigenbasis(const SymplecticMap& psi, double lambda_max, const ZeroScanOptions& opts = {}) {
  EigenBasis basis{psi, zeros_in_period(psi, opts), {}, lambda_max};
  const double scale = std::max(1.0, psi.matrix().norm());
  for (std::size_t l = 0; l < basis.zeros.zeros.size(); ++l) {
    const double tl = basis.zeros.zeros[l];
    Eigen::JacobiSVD<Matrix> svd(exp_sJ(tl, psi.n()) - psi.matrix(), Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    std::vector<Vector> seeds;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (sv(j) <= opts.kernel_tol * scale) seeds.push_back(svd.matrixV().col(j));
    if (seeds.empty()) seeds.push_back(svd.matrixV().col(sv.size() - 1));
    const int kmin = static_cast<int>(std::ceil((-lambda_max - tl) / kTwoPi));
    const int kmax = static_cast<int>(std::floor((lambda_max - tl) / kTwoPi));
    for (int k = kmin; k <= kmax; ++k) {
      const double lambda = tl + kTwoPi * k;
      if (std::abs(lambda) < 1e-9) continue;
      for (const Vector& x : seeds) basis.modes.push_back(Mode{lambda, x, static_cast<int>(l)});
    }
  }
  std::stable_sort(basis.modes.begin(), basis.modes.end(),
                   [](const Mode& a, const Mode& b) { return a.lambda < b.lambda; });
  return basis;
}

}  // namespace ehz
