#pragma once

// Property suites: axioms, Brunn-Minkowski, the inradius/circumradius
// sandwich, the derivative of the capacity along quadratic families and
// continuity under rounding.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehz/bodies.hpp"
#include "ehz/closedform.hpp"
#include "ehz/dualsolver.hpp"
#include "ehz/random.hpp"

namespace ehz {

struct PropertyRecord {
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double violation = 0.0;  // relative; 0 when the property holds exactly
  double slack = 0.0;
  bool pass = true;
};

struct PropertyReport {
  std::string property;
  double slack = 0.0;
  double max_violation = 0.0;  // over all records, each judged against its own slack
  bool pass = true;
  std::vector<PropertyRecord> records;

  int instances() const { return static_cast<int>(records.size()); }

  /// own_slack < 0 uses the report's slack.
  void add(std::string instance, double lhs, double rhs, double violation, double own_slack = -1.0) {
    const double sl = own_slack < 0.0 ? slack : own_slack;
    PropertyRecord r{std::move(instance), lhs, rhs, violation, sl, violation <= sl};
    max_violation = std::max(max_violation, violation);
    pass = pass && r.pass;
    records.push_back(std::move(r));
  }

  void merge(const PropertyReport& other) {
    for (const PropertyRecord& r : other.records) {
      max_violation = std::max(max_violation, r.violation);
      pass = pass && r.pass;
      records.push_back(r);
    }
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["property"] = property;
    j["instances"] = instances();
    j["slack"] = slack;
    j["max_violation"] = max_violation;
    j["pass"] = pass;
    j["records"] = nlohmann::ordered_json::array();
    for (const PropertyRecord& r : records)
      j["records"].push_back({{"instance", r.instance},
                              {"lhs", r.lhs},
                              {"rhs", r.rhs},
                              {"violation", r.violation},
                              {"slack", r.slack},
                              {"pass", r.pass}});
    return j;
  }
};

// ---- corpus ---------------------------------------------------------------

struct CorpusBody {
  std::string name;
  ConvexBody body;
};

/// Random convex polygon with 5 to 10 vertices around 0, rounded by a random radius.
inline ConvexBody random_rounded_polygon(Rng& rng) {
  const int m = rng.integer(5, 10);
  std::vector<double> ang(m);
  for (;;) {
    for (double& a : ang) a = rng.uniform(0.0, kTwoPi);
    std::sort(ang.begin(), ang.end());
    double gap = ang[0] + kTwoPi - ang[m - 1];
    for (int i = 1; i < m; ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    if (gap < 0.8 * std::numbers::pi) break;
  }
  Matrix v(2, m);
  for (int i = 0; i < m; ++i) {
    const double r = rng.uniform(0.6, 1.4);
    v(0, i) = r * std::cos(ang[i]);
    v(1, i) = r * std::sin(ang[i]);
  }
  return ConvexBody::polytope(v).rounded(rng.uniform(0.05, 0.3));
}

/// Random ellipse {1/2 <S z, z> < 1} with axes in [0.5, 1.5] and a random tilt.
inline ConvexBody random_ellipse(Rng& rng) {
  const double a = rng.uniform(0.5, 1.5), b = rng.uniform(0.5, 1.5), t = rng.uniform(0.0, std::numbers::pi);
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0 / (a * a);
  d(1, 1) = 2.0 / (b * b);
  return ConvexBody::ellipsoid(r * d * r.transpose());
}

/// Seeded corpus: in 2D alternating rounded polygons and ellipses, in 4D
/// symplectic products of two such planar bodies.
inline std::vector<CorpusBody> make_corpus(std::uint64_t seed, int count, int dim = 2) {
  if (dim != 2 && dim != 4) throw Error(ErrorCode::InvalidArgument, "corpus dimension must be 2 or 4");
  std::vector<CorpusBody> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    auto planar = [&](int k) { return k % 2 == 0 ? random_rounded_polygon(rng) : random_ellipse(rng); };
    if (dim == 2) {
      out.push_back({(i % 2 == 0 ? "polygon_" : "ellipse_") + std::to_string(i), planar(i)});
    } else {
      ConvexBody l = planar(i), r = planar(i + 1);
      out.push_back({"product_" + std::to_string(i), ConvexBody::product(l, r, ConvexBody::Layout::Symplectic)});
    }
  }
  return out;
}

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Violation of lhs <= rhs, relative to rhs.
inline double excess(double lhs, double rhs) { return std::max(0.0, lhs - rhs) / std::max(std::abs(rhs), 1e-300); }

inline double solve(const SymplecticMap& psi, const ConvexBody& body, const SolverOptions& opts) {
  SolverOptions o = opts;
  o.extract_carrier = false;
  return minimize_capacity(psi, body, o).value;
}

}  // namespace detail

// ---- checks -----------------------------------------------------------------

/// Conformality c(aD) = a^2 c(D), monotonicity D in D + eps B and the
/// envelope r^2 t / 2 <= c <= (2R/r)^2 r^2 t / 2 about the fixed point 0.
/// Conformality is judged with its own tighter slack since the solver is
/// scale-invariant.
inline PropertyReport check_axioms(const std::vector<CorpusBody>& corpus, const SymplecticMap& psi,
                                   double slack = 0.01, const SolverOptions& opts = {},
                                   double conformal_slack = 1e-3) {
  PropertyReport rep;
  rep.property = "axioms";
  rep.slack = slack;
  const double t = t_psi(psi);
  for (const CorpusBody& cb : corpus) {
    const double c = detail::solve(psi, cb.body, opts);
    const double c2 = detail::solve(psi, cb.body.scaled(2.0), opts);
    rep.add(cb.name + ":conformal_2", c2, 4.0 * c, detail::rel(c2, 4.0 * c), conformal_slack);
    const BodyStats st = stats(cb.body, Vector::Zero(cb.body.dim()));
    const double eps = 0.1 * st.inradius;
    const double cr = detail::solve(psi, cb.body.rounded(eps), opts);
    rep.add(cb.name + ":monotone_rounded", c, cr, detail::excess(c, cr));
    const double lower = st.inradius * st.inradius * t / 2.0;
    rep.add(cb.name + ":envelope_lower", lower, c, detail::excess(lower, c));
    const double upper = std::pow(2.0 * st.circumradius / st.inradius, 2) * lower;
    rep.add(cb.name + ":envelope_upper", c, upper, detail::excess(c, upper));
  }
  return rep;
}

struct SolvedBody {
  std::string name;
  ConvexBody body;
  double value = 0.0;
};

/// c(D +_p K)^{p/2} >= c(D)^{p/2} + c(K)^{p/2}; pairs with K = D are
/// equality instances and are held to `equality_slack`. Every solve is
/// appended to `solved` when given.
inline PropertyReport check_brunn_minkowski(const std::vector<std::pair<CorpusBody, CorpusBody>>& pairs,
                                            const SymplecticMap& psi, double p, double slack = 0.01,
                                            double equality_slack = 1e-3, const SolverOptions& opts = {},
                                            std::vector<SolvedBody>* solved = nullptr) {
  PropertyReport rep;
  rep.property = "brunn_minkowski_p" + std::to_string(static_cast<int>(p));
  rep.slack = slack;
  for (const auto& [d, k] : pairs) {
    const double cd = detail::solve(psi, d.body, opts);
    const double ck = d.name == k.name ? cd : detail::solve(psi, k.body, opts);
    const ConvexBody sum = ConvexBody::psum(d.body, k.body, p);
    const double cs = detail::solve(psi, sum, opts);
    if (solved) {
      solved->push_back({d.name, d.body, cd});
      if (d.name != k.name) solved->push_back({k.name, k.body, ck});
      solved->push_back({d.name + "+" + k.name, sum, cs});
    }
    const double lhs = std::pow(cs, p / 2.0);
    const double rhs = std::pow(cd, p / 2.0) + std::pow(ck, p / 2.0);
    if (d.name == k.name) {
      rep.add(d.name + "+" + k.name + ":equality", lhs, rhs, detail::rel(lhs, rhs), equality_slack);
    } else {
      rep.add(d.name + "+" + k.name, lhs, rhs, detail::excess(rhs, lhs));
    }
  }
  return rep;
}

/// r^2 t / 2 <= c <= R^2 t / 2 for B(x, r) in D in B(x, R), Psi x = x.
inline PropertyReport check_croke_weinstein(const std::vector<SolvedBody>& solved, const SymplecticMap& psi,
                                            const Vector& p_fix, double slack = 0.02) {
  if ((psi.matrix() * p_fix - p_fix).norm() > 1e-9 * std::max(1.0, p_fix.norm()))
    throw Error(ErrorCode::AssumptionViolated, "the center is not fixed by Psi");
  PropertyReport rep;
  rep.property = "croke_weinstein";
  rep.slack = slack;
  const double t = t_psi(psi);
  for (const SolvedBody& s : solved) {
    const BodyStats st = stats(s.body, p_fix);
    if (!(st.inradius > 0.0)) throw Error(ErrorCode::AssumptionViolated, s.name + ": center not interior");
    const double lo = st.inradius * st.inradius * t / 2.0;
    const double hi = st.circumradius * st.circumradius * t / 2.0;
    rep.add(s.name + ":lower", lo, s.value, detail::excess(lo, s.value));
    rep.add(s.name + ":upper", s.value, hi, detail::excess(s.value, hi));
  }
  return rep;
}

/// Central difference of C(e) = c({1/2 <S0 z, z> < e}) at e = 1 against the
/// period 2 int dt / <grad H, x> of the carrier, H(z) = 1/2 <S0 z, z>.
inline PropertyReport check_neduv(const Matrix& s0, const SymplecticMap& psi, double h = 1e-4, double slack = 1e-6) {
  PropertyReport rep;
  rep.property = "neduv";
  rep.slack = slack;
  const double cp = capacity_ellipsoid(psi, s0 / (1.0 + h)).value;
  const double cm = capacity_ellipsoid(psi, s0 / (1.0 - h)).value;
  const double fd = (cp - cm) / (2.0 * h);
  const CapacityResult base = capacity_ellipsoid(psi, s0);
  const double period = neduv_period(*base.carrier, [&](const Vector& z) { return Vector(s0 * z); });
  rep.add("dC/de", fd, period, detail::rel(fd, period));
  return rep;
}

/// c(D) <= c(D + eps B) <= (1 + eps / r)^2 c(D), within slack.
inline PropertyReport check_continuity(const CorpusBody& d, const SymplecticMap& psi, double eps,
                                       double slack = 0.01, const SolverOptions& opts = {}) {
  PropertyReport rep;
  rep.property = "continuity";
  rep.slack = slack;
  const double c = detail::solve(psi, d.body, opts);
  if (eps == 0.0) {
    const double c0 = detail::solve(psi, d.body.rounded(0.0), opts);
    rep.add(d.name + ":eps0", c0, c, detail::rel(c0, c));
    return rep;
  }
  const double r = stats(d.body, Vector::Zero(d.body.dim())).inradius;
  const double co = detail::solve(psi, d.body.rounded(eps), opts);
  const double upper = std::pow(1.0 + eps / r, 2) * c;
  rep.add(d.name + ":lower", c, co, detail::excess(c, co));
  rep.add(d.name + ":upper", co, upper, detail::excess(co, upper));
  return rep;
}

}  // namespace ehz
