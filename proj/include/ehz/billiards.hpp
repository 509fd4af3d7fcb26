#pragma once

// Generalized A-billiards in Delta with respect to Lambda: the lift
// Psi_A = diag(A, A^{-t}), xi^A = c^{Psi_A}(Delta x Lambda), bounce
// extraction from a carrier and the billiard checks.

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ehz/bodies.hpp"
#include "ehz/dualsolver.hpp"
#include "ehz/spectrum.hpp"

namespace ehz {

inline SymplecticMap psi_A(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "A must be square");
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
    throw Error(ErrorCode::SingularMatrix, "A is not invertible");
  const Eigen::Index n = a.rows();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.bottomRightCorner(n, n) = a.transpose().inverse();
  return SymplecticMap::make(m, 1e-9 * std::max(1.0, m.squaredNorm()));
}

namespace detail {

// Orthonormal basis of ker(A - I).
inline Matrix fixed_basis(const Matrix& a, double rel_tol = 1e-8) {
  const Eigen::Index n = a.rows();
  Eigen::JacobiSVD<Matrix> svd(a - Matrix::Identity(n, n), Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double scale = std::max(1.0, a.norm());
  int k = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= rel_tol * scale) ++k;
  return svd.matrixV().rightCols(k);
}

// Whether Fix(a) meets the interior of the body.
inline bool fix_meets_interior(const Matrix& a, const ConvexBody& body) {
  const Matrix f = fixed_basis(a);
  const Vector c = f.cols() ? Vector(f * (f.transpose() * body.interior_point())) : Vector::Zero(a.rows());
  const double scale = std::max(1.0, body.support(Vector::Unit(body.dim(), 0)) + body.support(-Vector::Unit(body.dim(), 0)));
  return body.translated(-c).contains_origin_interior(1e-9 * scale);
}

}  // namespace detail

/// xi^A_Lambda(Delta) = c^{Psi_A}(Delta x Lambda), Delta x Lambda in (q, p) layout.
inline CapacityResult xi(const Matrix& a, const ConvexBody& delta, const ConvexBody& lambda,
                         const SolverOptions& opts = {}) {
  if (delta.dim() != a.rows() || lambda.dim() != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "A, Delta and Lambda dimensions differ");
  const SymplecticMap psi = psi_A(a);
  if (!detail::fix_meets_interior(a, delta))
    throw Error(ErrorCode::AssumptionViolated, "Fix(A) does not meet the interior of Delta");
  if (!detail::fix_meets_interior(a.transpose(), lambda))
    throw Error(ErrorCode::AssumptionViolated, "Fix(A^t) does not meet the interior of Lambda");
  return minimize_capacity(psi, ConvexBody::product(delta, lambda, ConvexBody::Layout::Cartesian), opts);
}

enum class SampleTag { QMoving, Bounce };

struct BounceDecomposition {
  std::vector<Vector> bounce_points;  // q_0, ..., q_{m+1} with q_{m+1} = A q_0
  std::vector<SampleTag> segment_tags;
  double total_h_length = 0.0;        // sum h_Lambda(q_j - q_{j+1})
  int m = 0;                          // interior bounces
  double max_p_spread = 0.0;          // largest deviation of p within a q-moving segment
  double action = 0.0;                // carrier action, for comparison
};

/// Bounce points from a carrier of xi(). A sample is active on Delta (Lambda)
/// when the gauge of q (p) about the carrier's fixed point exceeds 1 - delta_act;
/// overshoot above 1 is truncation error and still counts as active.
inline BounceDecomposition extract_bounces(const Carrier& carrier, const Matrix& a, const ConvexBody& delta,
                                           const ConvexBody& lambda, double delta_act = 0.1) {
  const Eigen::Index n = a.rows();
  const std::size_t ns = carrier.points.size();
  if (ns < 3) throw Error(ErrorCode::InvalidArgument, "carrier has too few samples");
  if (carrier.points.front().size() != 2 * n || delta.dim() != n || lambda.dim() != n)
    throw Error(ErrorCode::DimensionMismatch, "carrier, A and bodies disagree in dimension");
  if (!(delta_act > 0.0 && delta_act < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta_act must lie in (0, 1)");
  const Vector fp = carrier.fixed_point.size() ? carrier.fixed_point : Vector::Zero(2 * n);
  const ConvexBody dc = delta.translated(-fp.head(n));
  const ConvexBody lc = lambda.translated(-fp.tail(n));

  std::vector<double> jq(ns), jp(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    jq[i] = dc.gauge(carrier.points[i].head(n) - fp.head(n));
    jp[i] = lc.gauge(carrier.points[i].tail(n) - fp.tail(n));
  }
  BounceDecomposition bd;
  bd.action = carrier.action;
  bd.segment_tags.resize(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const bool aq = jq[i] > 1.0 - delta_act;
    const bool ap = jp[i] > 1.0 - delta_act;
    if (!aq && !ap)
      throw Error(ErrorCode::ClassificationAmbiguous,
                  "sample " + std::to_string(i) + " is on neither boundary (j_q = " + std::to_string(jq[i]) +
                      ", j_p = " + std::to_string(jp[i]) + ")");
    bd.segment_tags[i] = aq ? SampleTag::Bounce : SampleTag::QMoving;
  }

  // runs of bounce samples; a run touching both ends wraps around through A
  struct Span {
    std::size_t lo, hi;
  };
  std::vector<Span> runs;
  for (std::size_t i = 0; i < ns;) {
    if (bd.segment_tags[i] != SampleTag::Bounce) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < ns && bd.segment_tags[j + 1] == SampleTag::Bounce) ++j;
    runs.push_back({i, j});
    i = j + 1;
  }
  const Matrix ainv = a.inverse();
  auto on_boundary = [&](const Vector& q) -> Vector {
    const Vector d = q - fp.head(n);
    const double g = dc.gauge(d);
    return Vector(fp.head(n) + d / g);
  };
  auto run_point = [&](const Span& s, bool pull_back) -> Vector {
    Vector sum = Vector::Zero(n);
    for (std::size_t i = s.lo; i <= s.hi; ++i) {
      const Vector q = carrier.points[i].head(n);
      sum += pull_back ? Vector(ainv * q) : q;
    }
    return sum / static_cast<double>(s.hi - s.lo + 1);
  };

  const bool starts_in_bounce = !runs.empty() && runs.front().lo == 0;
  const bool ends_in_bounce = !runs.empty() && runs.back().hi == ns - 1;
  std::size_t first = 0, last = runs.size();
  Vector q0;
  if (starts_in_bounce) {
    Vector sum = run_point(runs.front(), false) * static_cast<double>(runs.front().hi + 1);
    double count = static_cast<double>(runs.front().hi + 1);
    if (ends_in_bounce && runs.size() > 1) {
      const Span& e = runs.back();
      sum += run_point(e, true) * static_cast<double>(e.hi - e.lo + 1);
      count += static_cast<double>(e.hi - e.lo + 1);
      --last;
    }
    q0 = on_boundary(sum / count);
    first = 1;
  } else if (ends_in_bounce) {
    q0 = on_boundary(ainv * run_point(runs.back(), false));
    --last;
  } else {
    q0 = carrier.points.front().head(n);
  }
  bd.bounce_points.push_back(q0);
  for (std::size_t r = first; r < last; ++r) bd.bounce_points.push_back(on_boundary(run_point(runs[r], false)));
  bd.bounce_points.push_back(a * q0);
  bd.m = static_cast<int>(bd.bounce_points.size()) - 2;
  for (std::size_t j = 0; j + 1 < bd.bounce_points.size(); ++j)
    bd.total_h_length += lambda.support(bd.bounce_points[j] - bd.bounce_points[j + 1]);

  // p must stay put while q moves
  for (std::size_t i = 0; i < ns;) {
    if (bd.segment_tags[i] != SampleTag::QMoving) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < ns && bd.segment_tags[j + 1] == SampleTag::QMoving) ++j;
    Vector mean = Vector::Zero(n);
    for (std::size_t k = i; k <= j; ++k) mean += carrier.points[k].tail(n);
    mean /= static_cast<double>(j - i + 1);
    for (std::size_t k = i; k <= j; ++k)
      bd.max_p_spread = std::max(bd.max_p_spread, (carrier.points[k].tail(n) - mean).norm());
    i = j + 1;
  }
  return bd;
}

/// Bounce points as CSV: j, q components, h_Lambda(q_j - q_{j+1}) (empty on the last row).
inline void write_bounces_csv(std::ostream& os, const BounceDecomposition& bd, const ConvexBody& lambda) {
  const Eigen::Index n = bd.bounce_points.empty() ? 0 : bd.bounce_points.front().size();
  os << "j";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",q_" << i;
  os << ",h_length\n" << std::setprecision(15);
  for (std::size_t j = 0; j < bd.bounce_points.size(); ++j) {
    os << j;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << bd.bounce_points[j](i);
    os << ',';
    if (j + 1 < bd.bounce_points.size()) os << lambda.support(bd.bounce_points[j] - bd.bounce_points[j + 1]);
    os << '\n';
  }
}

struct BilliardReport {
  std::map<std::string, bool> checks;  // AGBi ... AGBvii
  std::string endpoint_case;            // which endpoint rule applied
  std::string endpoint_equation;        // which equation satisfied it, if any

  bool all() const {
    for (const auto& [k, v] : checks)
      if (!v) return false;
    return true;
  }
};

namespace detail {

// Outward unit normal at a boundary point q, from the gauge gradient.
inline Vector boundary_normal(const ConvexBody& body, const Vector& q) {
  const Eigen::Index n = q.size();
  const double h = 1e-6 * std::max(1.0, q.norm());
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = Vector::Unit(n, i) * h;
    g(i) = (body.gauge(q + e) - body.gauge(q - e)) / (2.0 * h);
  }
  return g.normalized();
}

inline bool is_support_vector(const ConvexBody& body, const Vector& q, const Vector& nu, double tol) {
  const double len = nu.norm();
  if (len <= tol) return true;
  return q.dot(nu) >= body.support(nu) - tol * len * std::max(1.0, q.norm());
}

}  // namespace detail

/// Checks a chain q_0, ..., q_m (q_m = A q_0) against the generalized
/// A-billiard conditions. The free unit vectors b_0, b_m are searched among
/// the continuation of the adjacent segment and its reflection in the normal.
inline BilliardReport validate_A_billiard(const std::vector<Vector>& q, const Matrix& a, const ConvexBody& delta,
                                          double tol = 1e-6) {
  BilliardReport rep;
  const std::size_t m = q.size() - 1;
  auto on_bd = [&](const Vector& x) { return std::abs(delta.gauge(x) - 1.0) <= tol; };
  auto unit = [](const Vector& v) { return Vector(v.normalized()); };

  bool i_ok = q.size() >= 3;
  for (std::size_t i = 1; i + 1 <= m && i_ok; ++i) i_ok = on_bd(q[i]);
  rep.checks["AGBi"] = i_ok;
  if (q.size() < 3) {
    for (const char* k : {"AGBii", "AGBiii", "AGBiv", "AGBv", "AGBvi", "AGBvii"}) rep.checks[k] = false;
    return rep;
  }

  bool distinct = true;
  const double sep = tol * std::max(1.0, q[0].norm());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      distinct = distinct && (q[i] - q[j]).norm() > sep;
      distinct = distinct && (q[i + 1] - q[j + 1]).norm() > sep;
    }
  rep.checks["AGBii"] = distinct;

  bool refl = true;
  for (std::size_t i = 1; i < m; ++i) {
    const Vector nu = unit(q[i] - q[i - 1]) + unit(q[i] - q[i + 1]);
    refl = refl && detail::is_support_vector(delta, q[i], nu, tol);
  }
  const Vector u0 = unit(q[1] - q[0]);
  const Vector um = unit(q[m] - q[m - 1]);
  auto candidates = [&](const Vector& x, const Vector& u) {
    std::vector<Vector> c{u};
    if (on_bd(x)) {
      const Vector nrm = detail::boundary_normal(delta, x);
      c.push_back(u - 2.0 * u.dot(nrm) * nrm);
    }
    return c;
  };
  std::vector<Vector> b0s, bms;
  for (const Vector& b : candidates(q[0], u0))
    if (detail::is_support_vector(delta, q[0], b - u0, tol)) b0s.push_back(b);
  for (const Vector& b : candidates(q[m], um))
    if (detail::is_support_vector(delta, q[m], um - b, tol)) bms.push_back(b);
  rep.checks["AGBiii"] = refl && !b0s.empty() && !bms.empty();

  auto close = [&](const Vector& x, const Vector& y) { return (x - y).norm() <= 1e3 * tol; };
  const bool e10 = close(a * u0, um);
  bool e11 = false, e12 = false, e13 = false;
  for (const Vector& b0 : b0s) e11 = e11 || close(a * b0, um);
  for (const Vector& bm : bms) e12 = e12 || close(a * u0, bm);
  for (const Vector& b0 : b0s)
    for (const Vector& bm : bms) e13 = e13 || close(a * b0, bm);

  const bool b_start = on_bd(q[0]);
  const bool b_end = on_bd(q[m]);
  rep.checks["AGBiv"] = rep.checks["AGBv"] = rep.checks["AGBvi"] = rep.checks["AGBvii"] = true;
  auto record = [&](const char* key, std::initializer_list<std::pair<const char*, bool>> eqs) {
    rep.endpoint_case = key;
    bool ok = false;
    for (const auto& [name, holds] : eqs)
      if (holds && !ok) {
        ok = true;
        rep.endpoint_equation = name;
      }
    rep.checks[key] = ok;
  };
  if (!b_start && !b_end) record("AGBiv", {{"velocity_match", e10}});
  else if (b_start && !b_end) record("AGBv", {{"velocity_match", e10}, {"start_reflected", e11}});
  else if (!b_start && b_end) record("AGBvi", {{"velocity_match", e10}, {"end_reflected", e12}});
  else record("AGBvii", {{"velocity_match", e10}, {"start_reflected", e11}, {"end_reflected", e12}, {"both_reflected", e13}});
  return rep;
}

struct BilliardBounds {
  double lower = 0.0;
  double upper = 0.0;
  double width_upper = std::numeric_limits<double>::quiet_NaN();  // only for A = I
  double t_psi = 0.0;
};

/// r t(Psi_A) / 2 <= xi^A(Delta) <= t(Psi_A) R for B(c, r) in Delta in B(c, R), A c = c.
inline BilliardBounds billiard_bounds(const Matrix& a, const ConvexBody& delta, double r, double big_r,
                                      const Vector& center = Vector()) {
  const Eigen::Index n = a.rows();
  if (delta.dim() != n) throw Error(ErrorCode::DimensionMismatch, "A and Delta dimensions differ");
  const Vector c = center.size() ? center : Vector::Zero(n);
  if ((a * c - c).norm() > 1e-9 * std::max(1.0, c.norm()))
    throw Error(ErrorCode::AssumptionViolated, "the center is not fixed by A");
  if (!(r > 0.0 && big_r >= r)) throw Error(ErrorCode::AssumptionViolated, "need 0 < r <= R");
  for (const Vector& u : detail::sphere_directions(static_cast<int>(n), 512)) {
    const double h = delta.support(u) - c.dot(u);
    if (h < r * (1.0 - 1e-9) || h > big_r * (1.0 + 1e-9))
      throw Error(ErrorCode::AssumptionViolated, "B(c, r) in Delta in B(c, R) fails");
  }
  BilliardBounds b;
  b.t_psi = t_psi(psi_A(a));
  b.lower = r * b.t_psi / 2.0;
  b.upper = b.t_psi * big_r;
  if ((a - Matrix::Identity(n, n)).norm() <= 1e-12) b.width_upper = 2.0 * stats(delta, c).width;
  return b;
}

}  // namespace ehz
