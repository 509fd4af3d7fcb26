#pragma once

// Capacities with exact or root-finding formulas: balls, ellipsoids,
// products of symplectic factors and cylinders under orthogonal Psi.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ehz/result.hpp"
#include "ehz/spectrum.hpp"

namespace ehz {

/// r^2 t(Psi) / 2.
inline CapacityResult capacity_ball(const SymplecticMap& psi, double r = 1.0) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const double t = t_psi(psi);
  CapacityResult res;
  res.value = r * r * t / 2.0;
  res.method = Method::ClosedForm;
  res.diagnostics["t_psi"] = t;
  return res;
}

struct EllipsoidOptions {
  double safety = 4.0;       // T_cap = 2 pi |S^{-1}| safety
  int min_grid = 4096;
  int samples_per_turn = 64; // grid density relative to the fastest rotation
  int carrier_samples = 513;
  /// Optional symplectic Phi mapping E(q) to normal form; enables the upper bound report.
  std::optional<Matrix> normal_form;
};

/// Symplectic eigenvalues omega_j of S (eigenvalues of JS are +-i omega_j), ascending.
inline std::vector<double> symplectic_frequencies(const Matrix& S) {
  const int n = static_cast<int>(S.rows() / 2);
  Eigen::EigenSolver<Matrix> es(standard_J(n) * S);
  std::vector<double> w;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).imag() > 0) w.push_back(es.eigenvalues()(i).imag());
  std::sort(w.begin(), w.end());
  return w;
}

/// Capacity of E = {1/2 <S z, z> < 1}: the smallest T > 0 with
/// det(exp(TJS) - Psi) = 0. The carrier is t -> exp(tJS) z0 on [0, T].
inline CapacityResult capacity_ellipsoid(const SymplecticMap& psi, const Matrix& S, const EllipsoidOptions& opts = {}) {
  const int d = psi.dim();
  if (S.rows() != d || S.cols() != d) throw Error(ErrorCode::DimensionMismatch, "S does not match Psi");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (S + S.transpose()));
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw Error(ErrorCode::InvalidArgument, "S must be positive definite");
  const Matrix J = standard_J(psi.n());
  const Matrix JS = J * S;
  const double smin = eig.eigenvalues().minCoeff();
  const double smax = eig.eigenvalues().maxCoeff();
  const double t_cap = 2.0 * std::numbers::pi / smin * opts.safety;
  const int grid = std::max(opts.min_grid, static_cast<int>(std::ceil(t_cap * smax / (2.0 * std::numbers::pi) *
                                                                       opts.samples_per_turn)));
  const double h = t_cap / grid;
  auto sig = [&](double T) { return sigma_min(expm(T * JS) - psi.matrix()); };

  // March the flow with a fixed step; exact re-evaluation only during refinement.
  const Matrix step = expm(h * JS);
  Matrix flow = step;
  std::vector<double> v(static_cast<std::size_t>(grid) + 1);
  v[0] = sigma_min(Matrix::Identity(d, d) - psi.matrix());
  for (int i = 1; i <= grid; ++i) {
    v[i] = sigma_min(flow - psi.matrix());
    flow = flow * step;
    if (i % 256 == 0) flow = expm((i + 1) * h * JS);
  }
  const double scale = std::max(1.0, psi.matrix().norm());
  double found = -1.0;
  for (int i = 1; i < grid && found < 0.0; ++i) {
    if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
    const double T = detail::golden_minimize(sig, h * (i - 1), h * (i + 1), 1e-13 * std::max(1.0, h * i));
    if (sig(T) <= 1e-8 * scale && T > 1e-9) found = T;
  }
  if (found < 0.0) throw Error(ErrorCode::NoZeroFound, "no return time T with det(exp(TJS) - Psi) = 0 below T_cap");

  CapacityResult res;
  res.value = found;
  res.method = Method::RootFind;
  res.diagnostics["t_cap"] = t_cap;
  res.diagnostics["grid"] = grid;
  res.diagnostics["sigma_min_at_root"] = sig(found);

  // carrier: z0 in the kernel, scaled to the level set
  Eigen::JacobiSVD<Matrix> svd(expm(found * JS) - psi.matrix(), Eigen::ComputeFullV);
  Vector z0 = svd.matrixV().col(d - 1);
  z0 /= std::sqrt(0.5 * z0.dot(S * z0));
  Carrier c;
  c.period_param = found;
  c.action = found;
  c.a0 = Vector::Zero(d);
  c.fixed_point = Vector::Zero(d);
  const int m = opts.carrier_samples;
  double bres = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = found * j / (m - 1);
    const Vector z = expm(t * JS) * z0;
    c.times.push_back(t);
    c.points.push_back(z);
    bres = std::max(bres, std::abs(std::sqrt(0.5 * z.dot(S * z)) - 1.0));
  }
  c.boundary_residual = bres;
  c.closure_residual = (c.points.back() - psi.matrix() * c.points.front()).norm();
  res.carrier = std::move(c);

  if (opts.normal_form) {
    const Matrix& phi = *opts.normal_form;
    const auto freqs = symplectic_frequencies(S);
    const double rn2 = 2.0 / freqs.front();  // largest normal-form radius squared
    const auto conj = SymplecticMap::make(phi * psi.matrix() * phi.inverse(), 1e-7);
    res.diagnostics["upper_bound"] = rn2 / 2.0 * t_psi(conj);
  }
  return res;
}

/// min_i cap_fn(Psi_i, D_i); ties resolve to the lowest index and every
/// argmin index is listed in the diagnostics.
template <class Body, class CapFn>
CapacityResult capacity_product(std::span<const std::pair<SymplecticMap, Body>> factors, CapFn&& cap_fn) {
  if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "product needs at least one factor");
  std::vector<CapacityResult> parts;
  parts.reserve(factors.size());
  for (const auto& [psi, body] : factors) parts.push_back(cap_fn(psi, body));
  std::size_t best = 0;
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i].value < parts[best].value) best = i;
  CapacityResult res = parts[best];
  res.carrier.reset();
  int count = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    res.diagnostics["factor_" + std::to_string(i)] = parts[i].value;
    if (std::abs(parts[i].value - parts[best].value) <= 1e-12 * std::max(1.0, parts[best].value))
      res.diagnostics["argmin_" + std::to_string(count++)] = static_cast<double>(i);
  }
  res.diagnostics["argmin_count"] = count;
  return res;
}

/// Z^{2n}(1) = B^2(1) x R^{2n-2} under orthogonal Psi: t(Psi) / 2.
inline CapacityResult capacity_orth_cylinder(const SymplecticMap& psi, double tol = 1e-9) {
  if (!psi.is_orthogonal(tol))
    throw Error(ErrorCode::NotOrthogonal, "|Psi^t Psi - I| = " + std::to_string(psi.orthogonality_defect()));
  CapacityResult res;
  const double theta1 = t_psi(psi);
  res.value = theta1 / 2.0;
  res.method = Method::ClosedForm;
  res.diagnostics["theta_1"] = theta1;
  return res;
}

}  // namespace ehz
