#pragma once

// Convex bodies described by their support function h_K(w) = sup <x, w>,
// together with a maximizer (a subgradient of h_K) and the gauge j_K.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ehz/errors.hpp"
#include "ehz/random.hpp"
#include "ehz/symplin.hpp"

namespace ehz {

class ConvexBody {
 public:
  enum class Kind { Ball, Ellipsoid, Polytope, Product, PSum, Scaled, Translated, Rounded };

  /// How a Product lays out its factors. Cartesian concatenates coordinates
  /// (used for Delta x Lambda in R^n_q x R^n_p). Symplectic interleaves the
  /// q- and p-blocks of two symplectic factors R^{2n1} x R^{2n2}, so that the
  /// body lives in R^{2n} with coordinates (q_1..q_n, p_1..p_n).
  enum class Layout { Cartesian, Symplectic };

  struct Node {
    Kind kind = Kind::Ball;
    int dim = 0;
    // Ball
    double radius = 0.0;
    Vector center;
    // Ellipsoid {1/2 <S z, z> < 1}
    Matrix S;
    Matrix S_inv;
    // Polytope: vertices as columns; facets <a_i, x> <= b_i with |a_i| = 1
    Matrix vertices;
    Matrix facet_normals;  // rows
    Vector facet_offsets;
    // composites
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    Layout layout = Layout::Cartesian;
    double p = 1.0;       // PSum exponent
    double factor = 1.0;  // Scaled
    Vector offset;        // Translated
    double epsilon = 0.0; // Rounded
  };

  ConvexBody() = default;

  // ---- constructors -------------------------------------------------------

  static ConvexBody ball(int dim, double radius = 1.0) { return ball(radius, Vector::Zero(dim)); }

  static ConvexBody ball(double radius, const Vector& center) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
    if (center.size() < 1) throw Error(ErrorCode::InvalidArgument, "ball dimension must be >= 1");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Ball;
    node->dim = static_cast<int>(center.size());
    node->radius = radius;
    node->center = center;
    return ConvexBody(node);
  }

  /// {z : 1/2 <S z, z> < 1} for symmetric positive definite S.
  static ConvexBody ellipsoid(const Matrix& S) {
    if (S.rows() != S.cols() || S.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "S must be square");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, S.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::InvalidArgument, "ellipsoid matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
    if (!(eig.eigenvalues().minCoeff() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "ellipsoid matrix must be positive definite");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Ellipsoid;
    node->dim = static_cast<int>(S.rows());
    node->S = 0.5 * (S + S.transpose());
    node->S_inv = node->S.inverse();
    return ConvexBody(node);
  }

  /// Axis-aligned ellipsoid with the given semi-axes.
  static ConvexBody ellipsoid_axes(const Vector& semi_axes) {
    Vector diag = (2.0 * semi_axes.array().square().inverse()).matrix();
    return ellipsoid(diag.asDiagonal().toDenseMatrix());
  }

  /// Convex hull of the columns of `vertices` (dim x m).
  static ConvexBody polytope(const Matrix& vertices) {
    if (vertices.rows() < 1 || vertices.cols() < vertices.rows() + 1)
      throw Error(ErrorCode::InvalidArgument, "polytope needs at least dim+1 vertices");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Polytope;
    node->dim = static_cast<int>(vertices.rows());
    node->vertices = vertices;
    compute_facets(*node);
    return ConvexBody(node);
  }

  /// [-a_1, a_1] x ... x [-a_d, a_d].
  static ConvexBody box(const Vector& half_widths) {
    const int d = static_cast<int>(half_widths.size());
    const int m = 1 << d;
    Matrix v(d, m);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < d; ++i) v(i, k) = ((k >> i) & 1) ? half_widths(i) : -half_widths(i);
    return polytope(v);
  }

  /// {x : A x <= b}, converted to vertex form by enumerating d-subsets of
  /// constraints (intended for d <= 4 and modest constraint counts).
  static ConvexBody from_halfspaces(const Matrix& a, const Vector& b) {
    const int d = static_cast<int>(a.cols());
    const int m = static_cast<int>(a.rows());
    if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "halfspace offsets do not match rows");
    std::vector<Vector> verts;
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    auto advance = [&]() {
      int i = d - 1;
      while (i >= 0 && idx[i] == m - d + i) --i;
      if (i < 0) return false;
      ++idx[i];
      for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    };
    if (m >= d) {
      do {
        Matrix sub(d, d);
        Vector rhs(d);
        for (int i = 0; i < d; ++i) {
          sub.row(i) = a.row(idx[i]);
          rhs(i) = b(idx[i]);
        }
        Eigen::FullPivLU<Matrix> lu(sub);
        if (lu.rank() < d) continue;
        const Vector x = lu.solve(rhs);
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        if (((a * x - b).array() <= 1e-9 * scale).all()) {
          bool dup = false;
          for (const auto& v : verts)
            if ((v - x).norm() <= 1e-9 * scale) dup = true;
          if (!dup) verts.push_back(x);
        }
      } while (advance());
    }
    if (static_cast<int>(verts.size()) < d + 1)
      throw Error(ErrorCode::InvalidArgument, "halfspaces do not describe a bounded full-dimensional polytope");
    Matrix v(d, static_cast<Eigen::Index>(verts.size()));
    for (std::size_t k = 0; k < verts.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = verts[k];
    return polytope(v);
  }

  static ConvexBody product(const ConvexBody& left, const ConvexBody& right, Layout layout = Layout::Cartesian) {
    if (layout == Layout::Symplectic && (left.dim() % 2 != 0 || right.dim() % 2 != 0))
      throw Error(ErrorCode::DimensionMismatch, "symplectic product needs even-dimensional factors");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Product;
    node->dim = left.dim() + right.dim();
    node->left = left.node_;
    node->right = right.node_;
    node->layout = layout;
    return ConvexBody(node);
  }

  /// Firey p-sum: support (h_D^p + h_K^p)^{1/p}; p = 1 is the Minkowski sum.
  static ConvexBody psum(const ConvexBody& left, const ConvexBody& right, double p) {
    if (left.dim() != right.dim()) throw Error(ErrorCode::DimensionMismatch, "p-sum of bodies of different dimension");
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p-sum exponent must be >= 1");
    if (p > 1.0 && (!left.contains_origin_interior() || !right.contains_origin_interior()))
      throw Error(ErrorCode::OriginNotInterior, "p-sum with p > 1 needs the origin inside both bodies");
    auto node = std::make_shared<Node>();
    node->kind = Kind::PSum;
    node->dim = left.dim();
    node->left = left.node_;
    node->right = right.node_;
    node->p = p;
    return ConvexBody(node);
  }

  ConvexBody scaled(double alpha) const {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Scaled;
    node->dim = dim();
    node->left = node_;
    node->factor = alpha;
    return ConvexBody(node);
  }

  ConvexBody translated(const Vector& v) const {
    check_dim(v);
    auto node = std::make_shared<Node>();
    node->kind = Kind::Translated;
    node->dim = dim();
    node->left = node_;
    node->offset = v;
    return ConvexBody(node);
  }

  /// K + eps B.
  ConvexBody rounded(double eps) const {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rounding radius must be >= 0");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Rounded;
    node->dim = dim();
    node->left = node_;
    node->epsilon = eps;
    return ConvexBody(node);
  }

  // ---- queries ------------------------------------------------------------

  bool valid() const { return node_ != nullptr; }
  int dim() const { return node_->dim; }
  Kind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  ConvexBody left() const { return ConvexBody(node_->left); }
  ConvexBody right() const { return ConvexBody(node_->right); }

  double support(const Vector& w) const {
    check_dim(w);
    return support_impl(*node_, w);
  }

  /// A point x of K with <x, w> = h_K(w). Polytope ties go to the lowest vertex index.
  Vector support_argmax(const Vector& w) const {
    check_dim(w);
    return argmax_impl(*node_, w);
  }

  /// Support value and maximizer in one traversal; h = <x, w>.
  double support_with_argmax(const Vector& w, Vector& x) const {
    check_dim(w);
    x = argmax_impl(*node_, w);
    return x.dot(w);
  }

  /// Minkowski functional inf{t > 0 : z in tK}; needs 0 in the interior.
  double gauge(const Vector& z) const {
    check_dim(z);
    return gauge_impl(*node_, z);
  }

  /// The declared interior point.
  Vector interior_point() const { return interior_impl(*node_); }

  /// True when the support function has kinks the solver should not see raw
  /// (bare polytopes and products).
  bool needs_rounding() const { return rounding_impl(*node_); }

  /// min over sampled unit directions of h_K(u) > margin.
  bool contains_origin_interior(double margin = 1e-12) const;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Ball: return "ball";
      case Kind::Ellipsoid: return "ellipsoid";
      case Kind::Polytope: return "polytope";
      case Kind::Product: return "product";
      case Kind::PSum: return "psum";
      case Kind::Scaled: return "scaled";
      case Kind::Translated: return "translated";
      case Kind::Rounded: return "rounded";
    }
    return "?";
  }

 private:
  explicit ConvexBody(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  void check_dim(const Vector& v) const {
    if (v.size() != dim())
      throw Error(ErrorCode::DimensionMismatch,
                  "vector of size " + std::to_string(v.size()) + " for body of dimension " + std::to_string(dim()));
  }

  // Split a vector of a product body into its factor components.
  static void split(const Node& n, const Vector& w, Vector& wl, Vector& wr) {
    const int dl = n.left->dim;
    const int dr = n.right->dim;
    if (n.layout == Layout::Cartesian) {
      wl = w.head(dl);
      wr = w.tail(dr);
      return;
    }
    const int n1 = dl / 2, n2 = dr / 2, nn = n1 + n2;
    wl.resize(dl);
    wr.resize(dr);
    wl.head(n1) = w.segment(0, n1);
    wl.tail(n1) = w.segment(nn, n1);
    wr.head(n2) = w.segment(n1, n2);
    wr.tail(n2) = w.segment(nn + n1, n2);
  }

  static Vector join(const Node& n, const Vector& xl, const Vector& xr) {
    Vector out(n.dim);
    const int dl = n.left->dim;
    const int dr = n.right->dim;
    if (n.layout == Layout::Cartesian) {
      out.head(dl) = xl;
      out.tail(dr) = xr;
      return out;
    }
    const int n1 = dl / 2, n2 = dr / 2, nn = n1 + n2;
    out.segment(0, n1) = xl.head(n1);
    out.segment(nn, n1) = xl.tail(n1);
    out.segment(n1, n2) = xr.head(n2);
    out.segment(nn + n1, n2) = xr.tail(n2);
    return out;
  }

  static double support_impl(const Node& n, const Vector& w) {
    switch (n.kind) {
      case Kind::Ball: return n.radius * w.norm() + n.center.dot(w);
      case Kind::Ellipsoid: return std::sqrt(std::max(0.0, 2.0 * w.dot(n.S_inv * w)));
      case Kind::Polytope: return (n.vertices.transpose() * w).maxCoeff();
      case Kind::Product: {
        Vector wl, wr;
        split(n, w, wl, wr);
        return support_impl(*n.left, wl) + support_impl(*n.right, wr);
      }
      case Kind::PSum: {
        const double a = support_impl(*n.left, w);
        const double b = support_impl(*n.right, w);
        if (n.p == 1.0) return a + b;
        return std::pow(std::pow(std::max(a, 0.0), n.p) + std::pow(std::max(b, 0.0), n.p), 1.0 / n.p);
      }
      case Kind::Scaled: return n.factor * support_impl(*n.left, w);
      case Kind::Translated: return support_impl(*n.left, w) + n.offset.dot(w);
      case Kind::Rounded: return support_impl(*n.left, w) + n.epsilon * w.norm();
    }
    return 0.0;
  }

  static Vector argmax_impl(const Node& n, const Vector& w) {
    switch (n.kind) {
      case Kind::Ball: {
        const double nw = w.norm();
        if (nw == 0.0) return n.center;
        return n.center + (n.radius / nw) * w;
      }
      case Kind::Ellipsoid: {
        // Lagrange stationarity on 1/2 <S z, z> = 1 gives z proportional to S^{-1} w
        const Vector y = n.S_inv * w;
        const double q = w.dot(y);
        if (q <= 0.0) return Vector::Zero(n.dim);
        return std::sqrt(2.0 / q) * y;
      }
      case Kind::Polytope: {
        Eigen::Index best = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < n.vertices.cols(); ++k) {
          const double v = n.vertices.col(k).dot(w);
          if (v > bv) {
            bv = v;
            best = k;
          }
        }
        return n.vertices.col(best);
      }
      case Kind::Product: {
        Vector wl, wr;
        split(n, w, wl, wr);
        return join(n, argmax_impl(*n.left, wl), argmax_impl(*n.right, wr));
      }
      case Kind::PSum: {
        const Vector xl = argmax_impl(*n.left, w);
        const Vector xr = argmax_impl(*n.right, w);
        if (n.p == 1.0) return xl + xr;
        const double a = std::max(support_impl(*n.left, w), 0.0);
        const double b = std::max(support_impl(*n.right, w), 0.0);
        const double h = std::pow(std::pow(a, n.p) + std::pow(b, n.p), 1.0 / n.p);
        if (h <= 0.0) return 0.5 * (xl + xr);
        return std::pow(h, 1.0 - n.p) * (std::pow(a, n.p - 1.0) * xl + std::pow(b, n.p - 1.0) * xr);
      }
      case Kind::Scaled: return n.factor * argmax_impl(*n.left, w);
      case Kind::Translated: return argmax_impl(*n.left, w) + n.offset;
      case Kind::Rounded: {
        const double nw = w.norm();
        Vector x = argmax_impl(*n.left, w);
        if (nw > 0.0) x += (n.epsilon / nw) * w;
        return x;
      }
    }
    return Vector();
  }

  static Vector interior_impl(const Node& n) {
    switch (n.kind) {
      case Kind::Ball: return n.center;
      case Kind::Ellipsoid: return Vector::Zero(n.dim);
      case Kind::Polytope: return n.vertices.rowwise().mean();
      case Kind::Product: return join(n, interior_impl(*n.left), interior_impl(*n.right));
      case Kind::PSum:
        if (n.p == 1.0) return interior_impl(*n.left) + interior_impl(*n.right);
        return Vector::Zero(n.dim);
      case Kind::Scaled: return n.factor * interior_impl(*n.left);
      case Kind::Translated: return interior_impl(*n.left) + n.offset;
      case Kind::Rounded: return interior_impl(*n.left);
    }
    return Vector();
  }

  static bool rounding_impl(const Node& n) {
    switch (n.kind) {
      case Kind::Ball:
      case Kind::Ellipsoid: return false;
      case Kind::Polytope:
      case Kind::Product: return true;
      case Kind::PSum: return rounding_impl(*n.left) || rounding_impl(*n.right);
      case Kind::Scaled:
      case Kind::Translated: return rounding_impl(*n.left);
      case Kind::Rounded: return n.epsilon > 0.0 ? false : rounding_impl(*n.left);
    }
    return false;
  }

  static double gauge_impl(const Node& n, const Vector& z) {
    switch (n.kind) {
      case Kind::Ball: {
        const double c2 = n.center.squaredNorm();
        const double r2 = n.radius * n.radius;
        if (!(c2 < r2)) throw Error(ErrorCode::OriginNotInterior, "ball does not contain the origin");
        const double zc = z.dot(n.center);
        const double a = r2 - c2;
        return (zc + std::sqrt(zc * zc + a * z.squaredNorm())) / a;
      }
      case Kind::Ellipsoid: return std::sqrt(std::max(0.0, 0.5 * z.dot(n.S * z)));
      case Kind::Polytope: {
        if (!(n.facet_offsets.minCoeff() > 0.0))
          throw Error(ErrorCode::OriginNotInterior, "polytope does not contain the origin in its interior");
        double j = 0.0;
        for (Eigen::Index i = 0; i < n.facet_normals.rows(); ++i)
          j = std::max(j, n.facet_normals.row(i).dot(z) / n.facet_offsets(i));
        return j;
      }
      case Kind::Product: {
        Vector zl, zr;
        split(n, z, zl, zr);
        return std::max(gauge_impl(*n.left, zl), gauge_impl(*n.right, zr));
      }
      case Kind::Scaled: return gauge_impl(*n.left, z) / n.factor;
      case Kind::PSum:
      case Kind::Translated:
      case Kind::Rounded: return gauge_by_duality(n, z);
    }
    return 0.0;
  }

  // j_K(z) = max over unit u of <z, u> / h_K(u) (h_K = j_{K polar}).
  static double gauge_by_duality(const Node& n, const Vector& z) {
    const double nz = z.norm();
    if (nz == 0.0) return 0.0;
    auto ratio = [&](const Vector& u) {
      const double h = support_impl(n, u);
      if (!(h > 0.0)) throw Error(ErrorCode::OriginNotInterior, "body does not contain the origin in its interior");
      return z.dot(u) / h;
    };
    if (n.dim == 1) return std::max(ratio(Vector::Ones(1)), ratio(-Vector::Ones(1)));
    if (n.dim == 2) {
      auto at = [&](double phi) {
        Vector u(2);
        u << std::cos(phi), std::sin(phi);
        return u;
      };
      // superlevel sets of the ratio are arcs, so a coarse scan plus golden
      // section around the best sample converges to the global maximum
      const int grid = 720;
      const double step = 2.0 * std::numbers::pi / grid;
      const double phi0 = std::atan2(z(1), z(0));
      int best = 0;
      double bv = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < grid; ++i) {
        const double v = ratio(at(phi0 + step * i));
        if (v > bv) {
          bv = v;
          best = i;
        }
      }
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = phi0 + step * (best - 1), b = phi0 + step * (best + 1);
      double c = b - invphi * (b - a), d = a + invphi * (b - a);
      double fc = ratio(at(c)), fd = ratio(at(d));
      while (b - a > 1e-13) {
        if (fc >= fd) {
          b = d; d = c; fd = fc; c = b - invphi * (b - a); fc = ratio(at(c));
        } else {
          a = c; c = d; fc = fd; d = a + invphi * (b - a); fd = ratio(at(d));
        }
      }
      return std::max({bv, fc, fd});
    }
    // projected gradient ascent on the sphere
    Vector u = z / nz;
    double val = ratio(u);
    double alpha = 0.5;
    for (int it = 0; it < 2000 && alpha > 1e-15; ++it) {
      const double h = support_impl(n, u);
      const Vector x = argmax_impl(n, u);
      Vector g = (z * h - z.dot(u) * x) / (h * h);
      g -= g.dot(u) * u;
      if (g.norm() < 1e-14) break;
      bool moved = false;
      while (alpha > 1e-15) {
        Vector cand = (u + alpha * g / g.norm()).normalized();
        const double cv = ratio(cand);
        if (cv > val) {
          u = cand;
          val = cv;
          alpha *= 2.0;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    return val;
  }

  static void compute_facets(Node& n) {
    const int d = n.dim;
    const int m = static_cast<int>(n.vertices.cols());
    const double scale = std::max(1.0, n.vertices.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * scale;
    std::vector<Vector> normals;
    std::vector<double> offsets;
    if (d == 1) {
      normals.push_back(Vector::Ones(1));
      offsets.push_back(n.vertices.maxCoeff());
      normals.push_back(-Vector::Ones(1));
      offsets.push_back(-n.vertices.minCoeff());
    } else {
      std::vector<int> idx(d);
      for (int i = 0; i < d; ++i) idx[i] = i;
      auto advance = [&]() {
        int i = d - 1;
        while (i >= 0 && idx[i] == m - d + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      };
      do {
        Matrix diffs(d - 1, d);
        for (int i = 1; i < d; ++i) diffs.row(i - 1) = (n.vertices.col(idx[i]) - n.vertices.col(idx[0])).transpose();
        Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullV);
        const Vector& sv = svd.singularValues();
        if (sv.size() < d - 1 || sv(d - 2) <= 1e-10 * std::max(1.0, sv(0))) continue;
        Vector a = svd.matrixV().col(d - 1);
        double b = a.dot(n.vertices.col(idx[0]));
        const Vector vals = n.vertices.transpose() * a;
        if ((vals.array() <= b + tol).all()) {
        } else if ((vals.array() >= b - tol).all()) {
          a = -a;
          b = -b;
        } else {
          continue;
        }
        bool dup = false;
        for (std::size_t k = 0; k < normals.size(); ++k)
          if ((normals[k] - a).norm() < 1e-9 && std::abs(offsets[k] - b) < 1e-9 * scale) dup = true;
        if (!dup) {
          normals.push_back(a);
          offsets.push_back(b);
        }
      } while (advance());
    }
    if (static_cast<int>(normals.size()) < d + 1)
      throw Error(ErrorCode::InvalidArgument, "polytope vertices do not span a full-dimensional body");
    n.facet_normals.resize(static_cast<Eigen::Index>(normals.size()), d);
    n.facet_offsets.resize(static_cast<Eigen::Index>(normals.size()));
    for (std::size_t k = 0; k < normals.size(); ++k) {
      n.facet_normals.row(static_cast<Eigen::Index>(k)) = normals[k].transpose();
      n.facet_offsets(static_cast<Eigen::Index>(k)) = offsets[k];
    }
  }

  std::shared_ptr<const Node> node_;
};

// ---- direction sampling and sphere optimization ---------------------------

namespace detail {

/// Deterministic unit directions: uniform angles in 2D, seeded Gaussian
/// samples otherwise.
inline std::vector<Vector> sphere_directions(int dim, int count, std::uint64_t seed = 0x5eed) {
  std::vector<Vector> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (dim == 1) {
    dirs.push_back(Vector::Ones(1));
    dirs.push_back(-Vector::Ones(1));
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / count;
      Vector u(2);
      u << std::cos(phi), std::sin(phi);
      dirs.push_back(u);
    }
    return dirs;
  }
  Rng rng(seed);
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(Vector::Unit(dim, i));
    dirs.push_back(-Vector::Unit(dim, i));
  }
  while (static_cast<int>(dirs.size()) < count) {
    Vector u(dim);
    for (int i = 0; i < dim; ++i) u(i) = rng.normal();
    if (u.norm() > 1e-12) dirs.push_back(u.normalized());
  }
  return dirs;
}

/// Minimize f over the unit sphere: dense scan plus local refinement.
template <class F>
double minimize_on_sphere(int dim, F&& f, int samples = 512, double refine_tol = 1e-6, Vector* argmin = nullptr) {
  if (dim == 2) {
    const int grid = std::max(samples, 2048);
    auto at = [](double phi) {
      Vector u(2);
      u << std::cos(phi), std::sin(phi);
      return u;
    };
    const double step = 2.0 * std::numbers::pi / grid;
    int best = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      const double v = f(at(step * i));
      if (v < bv) {
        bv = v;
        best = i;
      }
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = step * (best - 1), b = step * (best + 1);
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(at(c)), fd = f(at(d));
    while (b - a > 1e-12) {
      if (fc <= fd) {
        b = d; d = c; fd = fc; c = b - invphi * (b - a); fc = f(at(c));
      } else {
        a = c; c = d; fc = fd; d = a + invphi * (b - a); fd = f(at(d));
      }
    }
    const double phi = fc <= fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < bv) {
      bv = v;
      if (argmin) *argmin = at(phi);
    } else if (argmin) {
      *argmin = at(step * best);
    }
    return bv;
  }
  const auto dirs = sphere_directions(dim, samples);
  std::vector<std::pair<double, int>> vals;
  for (int i = 0; i < static_cast<int>(dirs.size()); ++i) vals.emplace_back(f(dirs[i]), i);
  std::sort(vals.begin(), vals.end());
  double best = vals.front().first;
  Vector best_u = dirs[vals.front().second];
  const int starts = std::min<int>(8, static_cast<int>(vals.size()));
  for (int s = 0; s < starts; ++s) {
    Vector u = dirs[vals[s].second];
    double fu = vals[s].first;
    double step = 0.1;
    while (step > refine_tol) {
      bool improved = false;
      for (int i = 0; i < dim && !improved; ++i) {
        for (double sign : {1.0, -1.0}) {
          Vector e = Vector::Unit(dim, i);
          e -= e.dot(u) * u;
          if (e.norm() < 1e-8) continue;
          const Vector cand = (u + sign * step * e.normalized()).normalized();
          const double fv = f(cand);
          if (fv < fu) {
            u = cand;
            fu = fv;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (fu < best) {
      best = fu;
      best_u = u;
    }
  }
  if (argmin) *argmin = best_u;
  return best;
}

}  // namespace detail

inline bool ConvexBody::contains_origin_interior(double margin) const {
  const double m = detail::minimize_on_sphere(dim(), [&](const Vector& u) { return support(u); }, 256, 1e-6);
  return m > margin;
}

// ---- geometric statistics -------------------------------------------------

struct BodyStats {
  double inradius = 0.0;     // about the given center
  double circumradius = 0.0; // about the given center
  double width = 0.0;
  double diameter = 0.0;
};

namespace detail {

inline std::optional<double> exact_inradius(const ConvexBody::Node& n, const Vector& c) {
  using Kind = ConvexBody::Kind;
  switch (n.kind) {
    case Kind::Ball: return n.radius - (c - n.center).norm();
    case Kind::Polytope: return (n.facet_offsets - n.facet_normals * c).minCoeff();
    case Kind::Rounded: {
      auto inner = exact_inradius(*n.left, c);
      if (inner) return *inner + n.epsilon;
      return std::nullopt;
    }
    case Kind::Scaled: {
      auto inner = exact_inradius(*n.left, c / n.factor);
      if (inner) return *inner * n.factor;
      return std::nullopt;
    }
    case Kind::Translated: return exact_inradius(*n.left, c - n.offset);
    default: return std::nullopt;
  }
}

}  // namespace detail

inline BodyStats stats(const ConvexBody& k, const Vector& center, int samples = 512) {
  if (center.size() != k.dim()) throw Error(ErrorCode::DimensionMismatch, "center dimension");
  BodyStats s;
  const int d = k.dim();
  auto h_c = [&](const Vector& u) { return k.support(u) - center.dot(u); };
  if (auto exact = detail::exact_inradius(k.node(), center)) {
    s.inradius = *exact;
  } else {
    s.inradius = detail::minimize_on_sphere(d, h_c, samples);
  }
  s.circumradius = -detail::minimize_on_sphere(d, [&](const Vector& u) { return -h_c(u); }, samples);
  s.width = detail::minimize_on_sphere(d, [&](const Vector& u) { return k.support(u) + k.support(-u); }, samples);
  s.diameter = -detail::minimize_on_sphere(d, [&](const Vector& u) { return -(k.support(u) + k.support(-u)); }, samples);
  return s;
}

/// Hausdorff distance as the sup-norm of the support-function difference on
/// the unit sphere.
inline double hausdorff(const ConvexBody& a, const ConvexBody& b, int samples = 2048) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "Hausdorff distance of bodies in different dimensions");
  return -detail::minimize_on_sphere(a.dim(), [&](const Vector& u) { return -std::abs(a.support(u) - b.support(u)); },
                                     samples);
}

}  // namespace ehz
