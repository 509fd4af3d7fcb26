#pragma once

// Numerical c^Psi_EHZ of a convex body through the Clarke dual principle in
// support-function form:
//
//   c^{p/2} = min over {x(1) = Psi x(0), A(x) = 1} of 2^{-p} int_0^1 h_D(-J x')^p dt,
//
// discretized in the eigenbasis of -J d/dt. In that basis the action is the
// diagonal form 1/2 sum lambda_k c_k^2 and -J x' = sum lambda_k c_k e_k, so
// only the dual integral needs quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ehz/bodies.hpp"
#include "ehz/random.hpp"
#include "ehz/result.hpp"
#include "ehz/spectrum.hpp"

namespace ehz {

/// Eigenbasis plus precomputed tables of e_k(t_j) on the quadrature grid.
/// Immutable; shared between restarts and curves.
struct GalerkinSpace {
  EigenBasis basis;
  FixedSpace fixed;
  int quad = 0;          // number of trapezoid intervals M; nodes t_j = j / M
  Vector weights;        // M + 1 trapezoid weights summing to 1
  Vector lambdas;        // eigenvalue per coefficient
  Matrix positions;      // row j*d + i: component i of e_k(t_j)
  Matrix velocities;     // lambda_k e_k(t_j), i.e. -J d/dt applied to the basis

  int dim() const { return basis.dim(); }
  int size() const { return static_cast<int>(lambdas.size()); }
  int nodes() const { return quad + 1; }
};

/// periods: lattice periods kept per zero family (cutoff 2 pi (periods + 1)).
/// quad <= 0 selects 8 x max(periods, 8) trapezoid intervals.
inline std::shared_ptr<const GalerkinSpace> make_galerkin_space(const SymplecticMap& psi, int periods = 32,
                                                                int quad = 0) {
  if (periods < 1) throw Error(ErrorCode::InvalidArgument, "need at least one lattice period");
  auto space = std::make_shared<GalerkinSpace>(
      GalerkinSpace{eigenbasis(psi, default_lambda_max(periods)), fixed_space(psi), 0, {}, {}, {}, {}});
  const int n_modes = space->basis.size();
  const int d = psi.dim();
  space->quad = quad > 0 ? quad : 8 * std::max(periods, 8);
  const int m = space->quad;
  space->weights = Vector::Constant(m + 1, 1.0 / m);
  space->weights(0) *= 0.5;
  space->weights(m) *= 0.5;
  space->lambdas.resize(n_modes);
  space->positions.resize(static_cast<Eigen::Index>(d) * (m + 1), n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const Mode& mode = space->basis.modes[k];
    space->lambdas(k) = mode.lambda;
    const Vector jx = apply_J(mode.seed);
    for (int j = 0; j <= m; ++j) {
      const double a = mode.lambda * j / m;
      space->positions.block(static_cast<Eigen::Index>(j) * d, k, d, 1) = std::cos(a) * mode.seed + std::sin(a) * jx;
    }
  }
  space->velocities = space->positions * space->lambdas.asDiagonal();
  return space;
}

/// A loop-like curve x(t) = sum_k c_k e_k(t); x(1) = Psi x(0) by construction.
struct DualCurve {
  std::shared_ptr<const GalerkinSpace> space;
  Vector coeffs;

  Vector eval(double t) const {
    Vector x = Vector::Zero(space->dim());
    for (int k = 0; k < space->size(); ++k) x += coeffs(k) * space->basis.modes[k].eval(t);
    return x;
  }
};

/// 1/2 int <-J x', x> dt = 1/2 sum lambda_k c_k^2 (exact, no quadrature).
inline double action(const DualCurve& x) {
  return 0.5 * (x.space->lambdas.array() * x.coeffs.array().square()).sum();
}

/// 2^{-p} int_0^1 h_D(-J x'(t))^p dt by the trapezoid rule.
inline double dual_functional(const DualCurve& x, const ConvexBody& body, double p = 2.0) {
  const GalerkinSpace& sp = *x.space;
  if (body.dim() != sp.dim()) throw Error(ErrorCode::DimensionMismatch, "body and curve dimensions differ");
  const int d = sp.dim();
  const Vector w = sp.velocities * x.coeffs;
  double sum = 0.0;
  for (int j = 0; j < sp.nodes(); ++j) {
    const double h = body.support(w.segment(static_cast<Eigen::Index>(j) * d, d));
    sum += sp.weights(j) * std::pow(std::max(h, 0.0), p);
  }
  return sum / std::pow(2.0, p);
}

/// Q(c) = I_p(c) / A(c)^{p/2} with gradient; +inf where A <= 0.
class DualObjective {
 public:
  DualObjective(std::shared_ptr<const GalerkinSpace> space, ConvexBody body, double p)
      : space_(std::move(space)), body_(std::move(body)), p_(p) {
    if (body_.dim() != space_->dim()) throw Error(ErrorCode::DimensionMismatch, "body and basis dimensions differ");
    if (!(p_ >= 1.0)) throw Error(ErrorCode::InvalidArgument, "dual exponent must be >= 1");
  }

  double action(const Vector& c) const { return 0.5 * (space_->lambdas.array() * c.array().square()).sum(); }

  /// I_p(c) and, optionally, its gradient.
  double dual(const Vector& c, Vector* grad) const {
    const GalerkinSpace& sp = *space_;
    const int d = sp.dim();
    const Vector w = sp.velocities * c;
    Vector dw;
    if (grad) dw.setZero(w.size());
    const double scale = std::pow(2.0, -p_);
    double sum = 0.0;
    Vector x(d);
    for (int j = 0; j < sp.nodes(); ++j) {
      const auto seg = w.segment(static_cast<Eigen::Index>(j) * d, d);
      const double h = std::max(body_.support_with_argmax(seg, x), 0.0);
      const double hp1 = p_ == 2.0 ? h : std::pow(h, p_ - 1.0);
      sum += sp.weights(j) * hp1 * h;
      if (grad) dw.segment(static_cast<Eigen::Index>(j) * d, d) = (sp.weights(j) * p_ * hp1 * scale) * x;
    }
    if (grad) *grad = sp.velocities.transpose() * dw;
    return sum * scale;
  }

  double value(const Vector& c, Vector* grad = nullptr) const {
    const double a = action(c);
    if (!(a > 0.0)) {
      if (grad) grad->setZero(c.size());
      return std::numeric_limits<double>::infinity();
    }
    Vector gi;
    const double i = dual(c, grad ? &gi : nullptr);
    const double ap = std::pow(a, 0.5 * p_);
    const double q = i / ap;
    if (grad) {
      const Vector ga = (space_->lambdas.array() * c.array()).matrix();
      *grad = gi / ap - (0.5 * p_ * q / a) * ga;
    }
    return q;
  }

  const GalerkinSpace& space() const { return *space_; }
  const std::shared_ptr<const GalerkinSpace>& space_ptr() const { return space_; }
  const ConvexBody& body() const { return body_; }
  double p() const { return p_; }

 private:
  std::shared_ptr<const GalerkinSpace> space_;
  ConvexBody body_;
  double p_;
};

struct SolverOptions {
  double p = 2.0;
  int modes = 32;           // lattice periods per zero family
  int quad = 0;             // 0: 8 x max(modes, 8)
  int restarts = 16;
  std::uint64_t seed = 0;
  double round_eps = -1.0;  // < 0: 1e-3 x inradius; 0 disables rounding
  int max_iter = 5000;      // per run and level of the mode ladder
  double gtol = 1e-9;       // relative gradient tolerance |grad| |c| / Q
  double ftol = 1e-7;       // relative decrease per 50 iterations below which a run has stalled
  int keep = 2;             // restarts carried from the coarse levels to the fine ones
  double tol_carrier = 1e-3;
  bool extract_carrier = true;
};

namespace detail {

struct BfgsResult {
  Vector x;
  double f = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;  // gradient test met
  bool stalled = false;    // no further decrease possible (nonsmooth optimum)
};

// Weak Wolfe line search by bracketing and bisection; copes with kinks.
template <class F>
bool wolfe_search(F&& f, const Vector& x, double fx, const Vector& gx, const Vector& d, double& t, double& ft,
                  Vector& gt) {
  const double c1 = 1e-4, c2 = 0.9;
  const double slope = gx.dot(d);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  t = 1.0;
  for (int it = 0; it < 60; ++it) {
    ft = f(x + t * d, &gt);
    if (!(ft <= fx + c1 * t * slope)) {
      hi = t;
    } else if (gt.dot(d) < c2 * slope) {
      lo = t;
    } else {
      return true;
    }
    t = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
    if (hi - lo < 1e-16 * std::max(1.0, hi)) break;
  }
  // accept any strict decrease found along the way
  if (lo > 0.0) {
    t = lo;
    ft = f(x + t * d, &gt);
    return ft < fx;
  }
  return false;
}

template <class F>
BfgsResult bfgs_on_sphere(F&& f, Vector x0, int max_iter, double gtol, double ftol = 1e-8, int window = 50) {
  BfgsResult r;
  Vector x = x0.normalized();
  Vector g;
  double fx = f(x, &g);
  const Eigen::Index n = x.size();
  Matrix H = Matrix::Identity(n, n) / std::max(g.norm(), 1e-300);
  double f_window = fx;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (g.norm() <= gtol * std::abs(fx)) {
      r.converged = true;
      break;
    }
    Vector dir = -H * g;
    if (!(dir.dot(g) < 0.0)) {
      H = Matrix::Identity(n, n) / std::max(g.norm(), 1e-300);
      dir = -H * g;
    }
    double t = 1.0, ft = 0.0;
    Vector gt;
    if (!wolfe_search(f, x, fx, g, dir, t, ft, gt)) {
      if (H.isApprox(Matrix::Identity(n, n) / std::max(g.norm(), 1e-300))) {
        r.stalled = true;
        break;
      }
      H = Matrix::Identity(n, n) / std::max(g.norm(), 1e-300);
      continue;
    }
    const Vector s = t * dir;
    const Vector y = gt - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (it == 0) H *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Vector hy = H * y;
      H += ((sy + y.dot(hy)) * rho * rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
    }
    x += s;
    // Q is 0-homogeneous: rescale onto the unit sphere; the gradient scales by |x|
    // and the inverse Hessian by |x|^2, so the iteration is unchanged
    const double nx = x.norm();
    x /= nx;
    g = gt * nx;
    H /= nx * nx;
    fx = ft;
    if ((it + 1) % window == 0) {
      if (f_window - fx <= ftol * std::abs(fx)) {
        r.stalled = true;
        ++it;
        break;
      }
      f_window = fx;
    }
  }
  r.x = x;
  r.f = fx;
  r.iterations = it;
  r.grad_norm = g.norm();
  return r;
}

inline Vector initial_coefficients(const GalerkinSpace& sp, Rng& rng) {
  const int n = sp.size();
  double lam1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k)
    if (sp.lambdas(k) > 0) lam1 = std::min(lam1, sp.lambdas(k));
  Vector c(n);
  for (int k = 0; k < n; ++k) {
    const double ratio = lam1 / std::abs(sp.lambdas(k));
    c(k) = rng.normal() * ratio * ratio;
  }
  // A depends on c only through c_k^2, so positivity is restored by damping
  // the negative-eigenvalue part rather than by sign flips.
  auto act = [&] { return 0.5 * (sp.lambdas.array() * c.array().square()).sum(); };
  for (int guard = 0; guard < 200 && !(act() > 0.0); ++guard)
    for (int k = 0; k < n; ++k)
      if (sp.lambdas(k) < 0) c(k) *= 0.5;
  if (!(act() > 0.0))
    for (int k = 0; k < n; ++k)
      if (sp.lambdas(k) == lam1) c(k) = 1.0;
  return c.normalized();
}

}  // namespace detail

/// Carrier from a minimizer u (any scale with A(u) > 0) of the quotient for
/// `body` (origin interior, already centered). `value` is the capacity.
inline Carrier extract_carrier_unchecked(const DualCurve& curve, const ConvexBody& body, double value, double p,
                                         const Vector& center) {
  const GalerkinSpace& sp = *curve.space;
  const int d = sp.dim();
  const double a = action(curve);
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "carrier extraction needs a curve of positive action");
  const Vector u = curve.coeffs / std::sqrt(a);
  const Vector w = sp.velocities * u;
  const Vector pos = sp.positions * u;
  const int nodes = sp.nodes();
  const double scale = std::pow(2.0, -p);

  // rho(t) in the subdifferential of h^p / 2^p at -J u'; rho - (p/2) mu_p u = a0
  std::vector<Vector> rho(nodes);
  double mu_p = 0.0;
  Vector x(d);
  for (int j = 0; j < nodes; ++j) {
    const double h = std::max(body.support_with_argmax(w.segment(static_cast<Eigen::Index>(j) * d, d), x), 0.0);
    mu_p += sp.weights(j) * std::pow(h, p) * scale;
    rho[j] = (p * scale * std::pow(h, p - 1.0)) * x;
  }
  Vector mean = Vector::Zero(d);
  for (int j = 0; j < nodes; ++j)
    mean += sp.weights(j) * (rho[j] - 0.5 * p * mu_p * pos.segment(static_cast<Eigen::Index>(j) * d, d));
  const Vector a0 = sp.fixed.project(mean);

  Carrier c;
  c.a0 = a0;
  c.period_param = value;
  c.fixed_point = center;
  const double root = std::sqrt(value);
  const Vector shift = (2.0 / p) * std::pow(value, 0.5 * (1.0 - p)) * a0;
  double bres = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Vector xj = root * pos.segment(static_cast<Eigen::Index>(j) * d, d) + shift;
    bres = std::max(bres, std::abs(body.gauge(xj) - 1.0));
    c.times.push_back(value * j / sp.quad);
    c.points.push_back(xj + center);
  }
  c.boundary_residual = bres;
  c.closure_residual = (c.points.back() - sp.basis.psi.matrix() * c.points.front()).norm();
  // shifts by E_1 constants leave the action unchanged
  c.action = value * action(DualCurve{curve.space, u});
  return c;
}

/// Checked extraction: throws CarrierResidualTooLarge beyond `tol` (relative).
inline Carrier extract_carrier(const DualCurve& curve, const ConvexBody& body, double value, double p = 2.0,
                               double tol = 1e-3, const Vector& center = Vector()) {
  const Vector ctr = center.size() ? center : Vector::Zero(body.dim());
  Carrier c = extract_carrier_unchecked(curve, body, value, p, ctr);
  const double scale = std::max(1.0, c.points.front().norm());
  if (c.boundary_residual > tol || c.closure_residual > tol * scale || std::abs(c.action - value) > tol * value)
    throw Error(ErrorCode::CarrierResidualTooLarge,
                "boundary residual " + std::to_string(c.boundary_residual) + ", closure residual " +
                    std::to_string(c.closure_residual));
  return c;
}

/// Sampled action 1/2 sum <-J dx, x_mid> along the carrier polyline.
inline double sampled_action(const Carrier& c) {
  double a = 0.0;
  for (std::size_t j = 0; j + 1 < c.points.size(); ++j) {
    const Vector dx = c.points[j + 1] - c.points[j];
    const Vector mid = 0.5 * (c.points[j + 1] + c.points[j]) - c.fixed_point;
    a += 0.5 * (-apply_J(dx)).dot(mid);
  }
  return a;
}

/// Interior Psi-fixed point used to center the body: the E_1-projection of
/// the declared interior point. Throws NoFixedInteriorPoint if it is not interior.
inline Vector fixed_interior_point(const SymplecticMap& psi, const ConvexBody& body) {
  if (body.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "body and Psi dimensions differ");
  const FixedSpace fs = fixed_space(psi);
  const Vector center = fs.project(body.interior_point());
  const ConvexBody shifted = body.translated(-center);
  const double scale = std::max(1.0, body.support(Vector::Unit(body.dim(), 0)) + body.support(-Vector::Unit(body.dim(), 0)));
  if (!shifted.contains_origin_interior(1e-9 * scale))
    throw Error(ErrorCode::NoFixedInteriorPoint, "no fixed point of Psi found in the interior of the body");
  return center;
}

namespace detail {

struct SingleSolve {
  double value = 0.0;
  Vector coeffs;
  std::vector<double> restart_values;
  int iterations = 0;
  double grad_norm = 0.0;
  int stalled = 0;
  int unfinished = 0;  // runs that hit max_iter while still decreasing
};

// Coefficients of `c` (in `from`) re-expressed in the larger space `to`.
inline Vector transfer_coefficients(const GalerkinSpace& from, const Vector& c, const GalerkinSpace& to) {
  Vector out = Vector::Zero(to.size());
  int l = 0;
  for (int k = 0; k < to.size() && l < from.size(); ++k) {
    const Mode& m = to.basis.modes[k];
    for (int j = 0; j < from.size(); ++j) {
      const Mode& o = from.basis.modes[j];
      if (o.zero_index == m.zero_index && std::abs(o.lambda - m.lambda) < 1e-9 && o.seed.dot(m.seed) > 1.0 - 1e-9) {
        out(k) = c(j);
        ++l;
        break;
      }
    }
  }
  return out;
}

// Mode ladder 2, 4, 8, ... up to `modes`.
inline std::vector<int> mode_ladder(int modes) {
  std::vector<int> lv;
  for (int m = 2; m < modes; m *= 2) lv.push_back(m);
  lv.push_back(modes);
  return lv;
}

struct Run {
  Vector coeffs;
  double f = 0.0;
};

// One BFGS run in the variables y = |lambda| c, which equalize the scales
// of the dual integral across modes.
template <class Obj>
BfgsResult precond_run(const Obj& obj, const Vector& c0, const SolverOptions& opts, double ftol) {
  const Vector lam = obj.space().lambdas.cwiseAbs();
  auto f = [&](const Vector& y, Vector* g) {
    Vector gc;
    const double v = obj.value(y.cwiseQuotient(lam), g ? &gc : nullptr);
    if (g) *g = gc.cwiseQuotient(lam);
    return v;
  };
  BfgsResult r = bfgs_on_sphere(f, c0.cwiseProduct(lam), opts.max_iter, opts.gtol, ftol);
  r.x = r.x.cwiseQuotient(lam);
  r.x.normalize();
  return r;
}

// Multistart on the coarse levels of the mode ladder, then the best `keep`
// runs are carried up to the full basis `space`. With `warm` set, a single
// run starts from it on the full basis.
inline SingleSolve solve_quotient(const std::shared_ptr<const GalerkinSpace>& space, const ConvexBody& body,
                                  const SolverOptions& opts, const Vector* warm = nullptr) {
  SingleSolve best;
  const SymplecticMap& psi = space->basis.psi;
  auto account = [&](const BfgsResult& r) {
    best.iterations += r.iterations;
    best.stalled += r.stalled ? 1 : 0;
    best.unfinished += (r.stalled || r.converged) ? 0 : 1;
  };
  // coarse levels only pick a basin, so they stop earlier
  const double coarse_ftol = std::max(opts.ftol, 1e-5);
  std::vector<Run> runs;
  if (warm) {
    runs.push_back({*warm, 0.0});
  } else {
    const std::vector<int> ladder = mode_ladder(opts.modes);
    const std::size_t coarse_levels = ladder.size() > 3 ? ladder.size() - 2 : 1;
    std::shared_ptr<const GalerkinSpace> prev;
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      const bool last = li + 1 == ladder.size();
      const auto sp = last ? space : make_galerkin_space(psi, ladder[li], 8 * std::max(ladder[li], 8));
      const DualObjective obj(sp, body, opts.p);
      if (!prev) {
        for (int r = 0; r < opts.restarts; ++r) {
          Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(r));
          runs.push_back({initial_coefficients(*sp, rng), 0.0});
        }
      } else {
        for (Run& run : runs) run.coeffs = transfer_coefficients(*prev, run.coeffs, *sp);
      }
      if (last) break;
      for (Run& run : runs) {
        const BfgsResult r = precond_run(obj, run.coeffs, opts, li + 1 < coarse_levels ? coarse_ftol : opts.ftol);
        account(r);
        run = {r.x, r.f};
      }
      if (li + 1 == coarse_levels) {
        for (const Run& run : runs) best.restart_values.push_back(std::pow(run.f, 2.0 / opts.p));
        std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.f < b.f; });
        if (static_cast<int>(runs.size()) > opts.keep) runs.resize(std::max(1, opts.keep));
      }
      prev = sp;
    }
  }
  const DualObjective obj(space, body, opts.p);
  best.value = std::numeric_limits<double>::infinity();
  const bool record = best.restart_values.empty();
  int finished = 0;
  double last_grad = 0.0;
  for (const Run& run : runs) {
    const BfgsResult r = precond_run(obj, run.coeffs, opts, opts.ftol);
    account(r);
    finished += (r.stalled || r.converged) ? 1 : 0;
    last_grad = r.grad_norm;
    if (record) best.restart_values.push_back(std::pow(r.f, 2.0 / opts.p));
    if (r.f < best.value) {
      best.value = r.f;
      best.coeffs = r.x;
      best.grad_norm = r.grad_norm;
    }
  }
  if (finished == 0)
    throw Error(ErrorCode::NonConvergence, "quotient still decreasing after " + std::to_string(opts.max_iter) +
                                               " iterations (|grad| = " + std::to_string(last_grad) + ")");
  best.value = std::pow(best.value, 2.0 / opts.p);
  return best;
}

}  // namespace detail

/// c^Psi_EHZ(D) by multistart quasi-Newton on the scale-invariant quotient.
inline CapacityResult minimize_capacity(const SymplecticMap& psi, const ConvexBody& body, const SolverOptions& opts = {}) {
  if (opts.restarts < 1) throw Error(ErrorCode::InvalidArgument, "need at least one restart");
  const Vector center = fixed_interior_point(psi, body);
  const ConvexBody centered = body.translated(-center);
  const auto space = make_galerkin_space(psi, opts.modes, opts.quad);

  CapacityResult res;
  res.method = Method::DualSolver;
  res.diagnostics["basis_size"] = space->size();
  res.diagnostics["quad_nodes"] = space->nodes();

  detail::SingleSolve main;
  if (centered.needs_rounding() && opts.round_eps != 0.0) {
    const double r = stats(centered, Vector::Zero(centered.dim())).inradius;
    const double eps0 = opts.round_eps > 0.0 ? opts.round_eps : 1e-3 * r;
    const auto s4 = detail::solve_quotient(space, centered.rounded(4 * eps0), opts);
    const auto s2 = detail::solve_quotient(space, centered.rounded(2 * eps0), opts, &s4.coeffs);
    main = detail::solve_quotient(space, centered.rounded(eps0), opts, &s2.coeffs);
    const double extrap = (8.0 * main.value - 6.0 * s2.value + s4.value) / 3.0;
    const double upper = main.value;
    const double lower = main.value / std::pow(1.0 + eps0 / r, 2.0);
    res.value = std::clamp(extrap, lower, upper);
    res.diagnostics["round_eps"] = eps0;
    res.diagnostics["value_eps1"] = main.value;
    res.diagnostics["value_eps2"] = s2.value;
    res.diagnostics["value_eps4"] = s4.value;
    res.diagnostics["richardson"] = extrap;
    res.diagnostics["bracket_lower"] = lower;
    res.diagnostics["bracket_upper"] = upper;
  } else {
    main = detail::solve_quotient(space, centered, opts);
    res.value = main.value;
  }
  for (std::size_t r = 0; r < main.restart_values.size(); ++r)
    res.diagnostics["restart_" + std::to_string(r)] = main.restart_values[r];
  res.diagnostics["iterations"] = main.iterations;
  res.diagnostics["grad_norm"] = main.grad_norm;
  res.diagnostics["stalled_restarts"] = main.stalled;
  res.diagnostics["unfinished_runs"] = main.unfinished;
  // reciprocal form: 1 / max{A : I_p = 1}
  {
    const DualObjective obj(space, centered, opts.p);
    const double i = obj.dual(main.coeffs, nullptr);
    const double a = obj.action(main.coeffs / std::pow(i, 1.0 / opts.p));
    res.diagnostics["reciprocal_form"] = 1.0 / a;
  }
  if (opts.extract_carrier) {
    Carrier c = extract_carrier_unchecked(DualCurve{space, main.coeffs}, centered, res.value, opts.p, center);
    res.diagnostics["carrier_boundary_residual"] = c.boundary_residual;
    res.diagnostics["carrier_closure_residual"] = c.closure_residual;
    res.diagnostics["carrier_action_sampled"] = sampled_action(c);
    res.carrier = std::move(c);
  }
  return res;
}

/// Values at periods m, 2m, 4m and the observed convergence order.
struct ModeStudy {
  std::vector<int> periods;
  std::vector<double> values;
  double order = std::numeric_limits<double>::quiet_NaN();
};

inline ModeStudy mode_refinement(const SymplecticMap& psi, const ConvexBody& body, SolverOptions opts, int base = 8) {
  ModeStudy st;
  opts.extract_carrier = false;
  for (int m : {base, 2 * base, 4 * base}) {
    opts.modes = m;
    st.periods.push_back(m);
    st.values.push_back(minimize_capacity(psi, body, opts).value);
  }
  const double d1 = st.values[0] - st.values[1];
  const double d2 = st.values[1] - st.values[2];
  if (d1 > 0.0 && d2 > 0.0) st.order = std::log2(d1 / d2);
  return st;
}

/// T_x = 2 int_0^C dt / <grad H(x(t)), x(t)> over the carrier samples.
inline double neduv_period(const Carrier& carrier, const std::function<Vector(const Vector&)>& grad_h,
                           double tol = 1e-12) {
  if (carrier.points.size() < 2) throw Error(ErrorCode::InvalidArgument, "carrier has too few samples");
  std::vector<double> f(carrier.points.size());
  for (std::size_t j = 0; j < carrier.points.size(); ++j) {
    const double den = grad_h(carrier.points[j]).dot(carrier.points[j]);
    if (!(den > tol)) throw Error(ErrorCode::ZeroDenominator, "<grad H(x), x> vanishes on the carrier");
    f[j] = 1.0 / den;
  }
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j)
    integral += 0.5 * (f[j] + f[j + 1]) * (carrier.times[j + 1] - carrier.times[j]);
  return 2.0 * integral;
}

}  // namespace ehz
