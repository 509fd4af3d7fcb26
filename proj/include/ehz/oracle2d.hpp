#pragma once

// Brute-force capacity of a planar body under a rotation R(theta): in the
// plane every generalized characteristic is a counterclockwise boundary arc
// from z0 to R(theta) z0, and its action is the swept sector area.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ehz/bodies.hpp"
#include "ehz/result.hpp"
#include "ehz/spectrum.hpp"

namespace ehz {

/// Counterclockwise sample of the boundary, one support point per direction
/// with consecutive duplicates (polygon vertices) merged.
struct BoundaryPolyline {
  std::vector<Vector> points;
  std::vector<double> angles;   // polar angle of each point, increasing from angles[0] < 2 pi
  std::vector<double> cum_area; // swept area from points[0] to points[i]; last entry is the full area
  bool origin_interior = false;

  int size() const { return static_cast<int>(points.size()); }
  double area() const { return cum_area.back(); }

  /// Index i of the segment points[i] -> points[i+1] hit by the ray at angle phi.
  int segment(double phi) const {
    double a = std::fmod(phi - angles[0], kTwoPi);
    if (a < 0.0) a += kTwoPi;
    a += angles[0];
    const auto it = std::upper_bound(angles.begin(), angles.end(), a);
    return static_cast<int>(it - angles.begin()) - 1;
  }

  /// Radial function: distance from 0 to the boundary along angle phi.
  double radius(double phi) const {
    const int i = segment(phi);
    const Vector& a = points[i];
    const Vector& b = points[(i + 1) % size()];
    const double dx = b(0) - a(0), dy = b(1) - a(1);
    const double ux = std::cos(phi), uy = std::sin(phi);
    return (a(0) * dy - a(1) * dx) / (ux * dy - uy * dx);
  }

  /// Swept area from the ray through points[0] to the ray at angle phi,
  /// counting full turns (phi may exceed angles[0] + 2 pi).
  double swept(double phi) const {
    const double turns = std::floor((phi - angles[0]) / kTwoPi);
    const double local = phi - turns * kTwoPi;
    const int i = segment(local);
    const double r = radius(local);
    const double x = r * std::cos(local), y = r * std::sin(local);
    const Vector& a = points[i];
    return turns * area() + cum_area[i] + 0.5 * (a(0) * y - a(1) * x);
  }
};

inline BoundaryPolyline boundary_polyline(const ConvexBody& body, int k = 4096) {
  if (body.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "the arc oracle is planar");
  if (k < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 boundary samples");
  BoundaryPolyline pl;
  const double scale = std::max(body.support(Vector::Unit(2, 0)), body.support(Vector::Unit(2, 1)));
  pl.origin_interior = body.contains_origin_interior(1e-9 * std::max(1.0, scale));
  if (!pl.origin_interior) throw Error(ErrorCode::OriginNotInterior, "the origin is not interior to the body");

  std::vector<Vector> raw;
  Vector u(2);
  for (int j = 0; j < k; ++j) {
    const double a = kTwoPi * j / k;
    u << std::cos(a), std::sin(a);
    Vector x = body.support_argmax(u);
    if (!raw.empty() && (x - raw.back()).norm() <= 1e-12 * scale) continue;
    raw.push_back(std::move(x));
  }
  while (raw.size() > 1 && (raw.front() - raw.back()).norm() <= 1e-12 * scale) raw.pop_back();

  // rotate so that polar angles increase from the smallest one
  std::vector<double> ang(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ang[i] = std::atan2(raw[i](1), raw[i](0));
    if (ang[i] < 0.0) ang[i] += kTwoPi;
  }
  const std::size_t first = static_cast<std::size_t>(std::min_element(ang.begin(), ang.end()) - ang.begin());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t j = (first + i) % raw.size();
    pl.points.push_back(raw[j]);
    pl.angles.push_back(ang[j]);
  }
  for (std::size_t i = 1; i < pl.angles.size(); ++i)
    if (pl.angles[i] <= pl.angles[i - 1])
      throw Error(ErrorCode::InvalidArgument, "boundary sample is not star-shaped about the origin");

  pl.cum_area.assign(pl.points.size() + 1, 0.0);
  for (int i = 0; i < pl.size(); ++i) {
    const Vector& a = pl.points[i];
    const Vector& b = pl.points[(i + 1) % pl.size()];
    pl.cum_area[i + 1] = pl.cum_area[i] + 0.5 * (a(0) * b(1) - a(1) * b(0));
  }
  return pl;
}

/// Capacity of a planar body containing 0 under R(theta), theta in (0, 2 pi]:
/// the least swept area over arcs [phi, phi + theta] whose endpoints are
/// both on the boundary, i.e. roots of rho(phi + theta) = rho(phi).
inline CapacityResult arc_capacity_2d(const ConvexBody& body, double theta, int k = 4096) {
  if (!(theta > 0.0 && theta <= kTwoPi + 1e-12)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 2pi]");
  const BoundaryPolyline pl = boundary_polyline(body, k);
  auto f = [&](double phi) { return pl.radius(phi + theta) - pl.radius(phi); };
  auto value_at = [&](double phi) { return pl.swept(phi + theta) - pl.swept(phi); };

  double rmax = 0.0;
  for (const Vector& x : pl.points) rmax = std::max(rmax, x.norm());
  const double ztol = 1e-12 * rmax;

  const int grid = std::max(k, 1024);
  std::vector<double> phi(grid + 1), fv(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    phi[j] = pl.angles[0] + kTwoPi * j / grid;
    fv[j] = f(phi[j]);
  }
  double best = std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  int roots = 0;
  auto consider = [&](double p) {
    ++roots;
    const double v = value_at(p);
    if (v < best) {
      best = v;
      best_phi = p;
    }
  };
  for (int j = 0; j < grid; ++j) {
    if (std::abs(fv[j]) <= ztol) {
      consider(phi[j]);
      continue;
    }
    if (std::abs(fv[j + 1]) <= ztol || (fv[j] > 0.0) == (fv[j + 1] > 0.0)) continue;
    double lo = phi[j], hi = phi[j + 1], flo = fv[j];
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    consider(0.5 * (lo + hi));
  }
  if (roots == 0) {
    // rotation-invariant shapes (discs): F is only polyline noise of the
    // size of the chord sag, so accept its near-zero local minima
    const double sag = 4.0 * std::pow(std::numbers::pi / k, 2) * rmax;
    for (int j = 0; j < grid; ++j) {
      const double a = std::abs(fv[j]);
      if (a <= sag && a <= std::abs(fv[(j + grid - 1) % grid]) && a <= std::abs(fv[j + 1])) consider(phi[j]);
    }
  }
  if (roots == 0) throw Error(ErrorCode::NoZeroFound, "no arc with both endpoints on the boundary");

  CapacityResult res;
  res.value = best;
  res.method = Method::Oracle2D;
  res.diagnostics["theta"] = theta;
  res.diagnostics["boundary_points"] = pl.size();
  res.diagnostics["area"] = pl.area();
  res.diagnostics["roots"] = roots;
  res.diagnostics["argmin_angle"] = std::fmod(best_phi, kTwoPi);
  return res;
}

}  // namespace ehz
