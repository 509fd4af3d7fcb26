// Acceptance run: one PASS/FAIL line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "ehz/billiards.hpp"
#include "ehz/cli.hpp"
#include "ehz/closedform.hpp"
#include "ehz/dualsolver.hpp"
#include "ehz/oracle2d.hpp"
#include "ehz/verify.hpp"

using namespace ehz;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SolverOptions quiet(SolverOptions o = {}) {
  o.extract_carrier = false;
  return o;
}

// bodies solved along the way, grouped by Psi, for the sandwich check
struct Solved {
  SymplecticMap psi;
  std::vector<SolvedBody> bodies;
};
std::map<std::string, Solved> g_solved;

void remember(const std::string& key, const SymplecticMap& psi, const std::string& name, const ConvexBody& b,
              double v) {
  auto it = g_solved.find(key);
  if (it == g_solved.end()) it = g_solved.emplace(key, Solved{psi, {}}).first;
  it->second.bodies.push_back({name, b, v});
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  double worst_fixed = 0.0, worst_phase = 0.0;
  for (int n : {1, 2, 3}) {
    worst_fixed = std::max(worst_fixed, std::abs(t_psi(SymplecticMap::identity(n)) - kTwoPi));
    worst_fixed = std::max(worst_fixed, std::abs(t_psi(SymplecticMap::make(-Matrix::Identity(2 * n, 2 * n))) - kPi));
  }
  Rng rng(101);
  bool counts_ok = true;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 4;
    const Eigen::MatrixXcd u = test::random_unitary(n, rng);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
    std::vector<double> phases;
    for (int k = 0; k < n; ++k) {
      double a = std::arg(es.eigenvalues()(k));
      if (a <= 0.0) a += kTwoPi;
      phases.push_back(a);
    }
    std::sort(phases.begin(), phases.end());
    const ZeroSet z = zeros_in_period(from_unitary(u));
    if (z.zeros.size() != phases.size()) {
      counts_ok = false;
      continue;
    }
    for (int k = 0; k < n; ++k) worst_phase = std::max(worst_phase, std::abs(z.zeros[k] - phases[k]));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_fixed <= 1e-9 && counts_ok && worst_phase <= 1e-8 && secs < 5.0;
  o.detail = "t(+-I) err " + fmt("%.1e", worst_fixed) + ", unitary phase err " + fmt("%.1e", worst_phase) +
             (counts_ok ? "" : ", zero count mismatch") + ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  double err = std::abs(capacity_ball(SymplecticMap::identity(1), 1.0).value - kPi);
  err = std::max(err, std::abs(capacity_ball(SymplecticMap::make(-Matrix::Identity(2, 2)), 1.0).value - kPi / 2));
  Rng rng(202);
  double worst = 0.0;
  for (int i = 0; i < 12; ++i) {
    const int n = 1 + i % 3;
    Matrix s = Matrix::Zero(2 * n, 2 * n);
    double rmin = 1e300;
    for (int k = 0; k < n; ++k) {
      const double r = rng.uniform(0.4, 2.0);
      rmin = std::min(rmin, r);
      s(k, k) = s(n + k, n + k) = 2.0 / (r * r);
    }
    // a unitary change of frame keeps the capacity under Psi = I
    const Matrix u = from_unitary(test::random_unitary(n, rng)).matrix();
    const Matrix su = u.transpose() * s * u;
    worst = std::max(worst, std::abs(capacity_ellipsoid(SymplecticMap::identity(n), su).value - kPi * rmin * rmin));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = err <= 1e-9 && worst <= 1e-8 && secs < 5.0;
  o.detail = "ball err " + fmt("%.1e", err) + ", ellipsoid err " + fmt("%.1e", worst) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome criterion3() {
  const ConvexBody disc = ConvexBody::ball(2, 1.0);
  const std::vector<std::pair<double, double>> cases = {
      {kTwoPi, kPi}, {kPi / 3, kPi / 6}, {kPi / 2, kPi / 4}, {1.5 * kPi, 0.75 * kPi}};
  SolverOptions opts;
  opts.modes = 32;
  opts.restarts = 16;
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  for (const auto& [th, expect] : cases) {
    const auto t0 = Clock::now();
    const auto psi = SymplecticMap::rotation(th);
    const double v = minimize_capacity(psi, disc, opts).value;
    slowest = std::max(slowest, seconds_since(t0));
    worst = std::max(worst, rel(v, expect));
    remember("rot" + fmt("%.6f", th), psi, "disc", disc, v);
  }
  o.pass = worst <= 0.01 && slowest < 10.0;
  o.detail = "max rel err " + fmt("%.1e", worst) + ", slowest run " + fmt("%.2f", slowest) + " s";
  return o;
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng = Rng::stream(404, static_cast<std::uint64_t>(i));
    const ConvexBody body = random_rounded_polygon(rng);
    for (double th : {kPi / 2, kPi, kTwoPi}) {
      const auto psi = SymplecticMap::rotation(th);
      const double v = minimize_capacity(psi, body, quiet()).value;
      const double ref = arc_capacity_2d(body, th).value;
      worst = std::max(worst, rel(v, ref));
      remember("rot" + fmt("%.6f", th), psi, "polygon_" + std::to_string(i), body, v);
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= 0.02 && secs < 180.0;
  o.detail = "30 solves vs arc oracle, max rel diff " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome criterion5() {
  const auto psi = oplus(SymplecticMap::identity(1), SymplecticMap::identity(1));
  double worst = 0.0;
  for (double rho : {0.5, 1.0, 2.0}) {
    const ConvexBody b = ConvexBody::product(ConvexBody::ball(2, 1.0), ConvexBody::ball(2, rho),
                                             ConvexBody::Layout::Symplectic);
    const double v = minimize_capacity(psi, b, quiet()).value;
    worst = std::max(worst, rel(v, std::min(kPi, kPi * rho * rho)));
    remember("id2", psi, "ball_x_ball_" + fmt("%.1f", rho), b, v);
  }
  Outcome o;
  o.pass = worst <= 0.02;
  o.detail = "rho in {0.5, 1, 2}, max rel err " + fmt("%.2e", worst);
  return o;
}

Outcome criterion6() {
  const Matrix id = Matrix::Identity(2, 2);
  const ConvexBody disc = ConvexBody::ball(2, 1.0);
  Vector hw(2);
  hw << 1.0, 1.0;
  const ConvexBody square = ConvexBody::box(hw);
  Outcome o;

  const CapacityResult rd = xi(id, disc, disc);
  const BounceDecomposition bd = extract_bounces(*rd.carrier, id, disc, disc);
  const bool disc_ok = rel(rd.value, 4.0) <= 0.02;
  const bool bounce_ok = bd.m == 1 && rel(bd.total_h_length, rd.value) <= 0.01;

  const double xs = xi(id, square, disc, quiet()).value;
  const bool square_ok = rel(xs, 4.0) <= 0.02;

  // envelope over the billiard corpus
  std::vector<std::pair<std::string, ConvexBody>> corpus = {{"disc", disc}, {"square", square}};
  corpus.push_back({"ellipse", ConvexBody::ellipsoid_axes(Vector::LinSpaced(2, 0.7, 1.3))});
  for (int i = 0; i < 3; ++i) {
    Rng rng = Rng::stream(606, static_cast<std::uint64_t>(i));
    corpus.push_back({"polygon_" + std::to_string(i), random_rounded_polygon(rng)});
  }
  double worst = 0.0;
  for (const auto& [name, delta] : corpus) {
    const double v = name == "disc" ? rd.value : name == "square" ? xs : xi(id, delta, disc, quiet()).value;
    remember("id2", SymplecticMap::identity(2), name + "_x_disc", ConvexBody::product(delta, disc), v);
    const BodyStats st = stats(delta, Vector::Zero(2));
    const BilliardBounds bb = billiard_bounds(id, delta, st.inradius, st.circumradius * (1 + 1e-8));
    worst = std::max({worst, (bb.lower - v) / v, (v - bb.upper) / v});
  }
  const bool env_ok = worst <= 0.0;
  o.pass = disc_ok && bounce_ok && square_ok && env_ok;
  o.detail = "xi(disc) " + fmt("%.4f", rd.value) + ", bounces " + std::to_string(bd.m) + " with sum h " +
             fmt("%.4f", bd.total_h_length) + ", xi(square) " + fmt("%.4f", xs) + ", envelope " +
             (env_ok ? "holds" : "violated by " + fmt("%.2e", worst)) + " on " + std::to_string(corpus.size()) +
             " bodies";
  return o;
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const auto psi = SymplecticMap::identity(1);
  const auto corpus = make_corpus(707, 40);
  std::vector<std::pair<CorpusBody, CorpusBody>> pairs;
  for (int i = 0; i < 20; ++i) pairs.push_back({corpus[2 * i], corpus[2 * i + 1]});
  for (int i = 0; i < 4; ++i) pairs.push_back({corpus[i], corpus[i]});
  PropertyReport all;
  std::vector<SolvedBody> solved;
  for (double p : {1.0, 2.0}) all.merge(check_brunn_minkowski(pairs, psi, p, 0.01, 1e-3, quiet(), &solved));
  for (const SolvedBody& s : solved) remember("id1", psi, s.name, s.body, s.value);
  Outcome o;
  o.pass = all.pass;
  o.detail = std::to_string(all.instances()) + " instances (20 pairs + 4 equality, p in {1, 2}), max violation " +
             fmt("%.2e", all.max_violation) + ", " + fmt("%.1f", seconds_since(t0)) + " s";
  return o;
}

Outcome criterion8() {
  PropertyReport all;
  int count = 0;
  for (const auto& [key, s] : g_solved) {
    all.merge(check_croke_weinstein(s.bodies, s.psi, Vector::Zero(s.psi.dim()), 0.02));
    count += static_cast<int>(s.bodies.size());
  }
  Outcome o;
  o.pass = all.pass && count > 0;
  o.detail = std::to_string(count) + " solved bodies, max violation " + fmt("%.2e", all.max_violation);
  return o;
}

Outcome criterion9() {
  Rng rng(909);
  PropertyReport all;
  for (int i = 0; i < 6; ++i) {
    const int n = 1 + i % 2;
    Matrix m(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < 2 * n; ++c) m(r, c) = rng.normal();
    const Matrix s0 = m * m.transpose() + 0.5 * Matrix::Identity(2 * n, 2 * n);
    all.merge(check_neduv(s0, SymplecticMap::identity(n)));
    all.merge(check_neduv(s0, SymplecticMap::rotation(rng.uniform(0.3, 6.0), n)));
  }
  Outcome o;
  o.pass = all.pass;
  o.detail = std::to_string(all.instances()) + " families, max rel diff " + fmt("%.1e", all.max_violation);
  return o;
}

Outcome criterion10() {
  std::vector<std::string> failed;

  // scale invariance and gradient of the quotient
  double scale_err = 0.0, grad_err = 0.0;
  {
    Rng rng(1010);
    const Matrix s4 = ConvexBody::ellipsoid_axes(Vector::LinSpaced(4, 0.6, 1.4)).node().S;
    const std::vector<std::pair<SymplecticMap, ConvexBody>> smooth = {
        {SymplecticMap::rotation(kPi / 3), ConvexBody::ball(2, 1.0)},
        {SymplecticMap::identity(1), ConvexBody::ellipsoid_axes(Vector::LinSpaced(2, 0.5, 1.5))},
        {SymplecticMap::rotation(1.0, 2), ConvexBody::ellipsoid(s4)}};
    for (const auto& [psi, body] : smooth) {
      const auto sp = make_galerkin_space(psi, 8);
      for (double p : {1.5, 2.0, 3.0}) {
        const DualObjective obj(sp, body, p);
        Vector c(sp->size());
        for (int k = 0; k < c.size(); ++k) c(k) = rng.normal() / (1.0 + std::abs(sp->lambdas(k)));
        for (int k = 0; k < c.size(); ++k)
          if (sp->lambdas(k) > 0 && sp->lambdas(k) < 7.0) c(k) += 2.0;
        Vector g;
        const double q = obj.value(c, &g);
        for (double a : {1e-3, 0.37, 12.0, 1e5}) scale_err = std::max(scale_err, rel(obj.value(a * c), q));
        Vector fd(c.size());
        const double h = 1e-6 * c.norm();
        for (int k = 0; k < c.size(); ++k) {
          Vector cp = c, cm = c;
          cp(k) += h;
          cm(k) -= h;
          fd(k) = (obj.value(cp) - obj.value(cm)) / (2 * h);
        }
        grad_err = std::max(grad_err, (g - fd).norm() / g.norm());
      }
    }
  }
  if (scale_err > 1e-13) failed.push_back("scale " + fmt("%.1e", scale_err));
  if (grad_err > 1e-5) failed.push_back("gradient " + fmt("%.1e", grad_err));

  // conformality, monotonicity, envelope and rounding bracket on a seeded corpus
  const auto corpus = make_corpus(1111, 4);
  const PropertyReport ax = check_axioms(corpus, SymplecticMap::rotation(kPi / 2), 0.01, quiet());
  if (!ax.pass) failed.push_back("axioms " + fmt("%.1e", ax.max_violation));
  PropertyReport cont;
  for (const CorpusBody& c : corpus) cont.merge(check_continuity(c, SymplecticMap::identity(1), 0.05, 0.01, quiet()));
  cont.merge(check_continuity(corpus.front(), SymplecticMap::identity(1), 0.0, 0.01, quiet()));
  if (!cont.pass) failed.push_back("rounding bracket " + fmt("%.1e", cont.max_violation));

  // CLI determinism under a fixed seed
  const std::string psi = std::string(EHZ_DATA_DIR) + "/rotation_pi3.json";
  const std::string body = std::string(EHZ_DATA_DIR) + "/rounded_square.json";
  auto cli_out = [&](const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"ehz"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str() + err.str();
  };
  const std::vector<std::string> args = {"capacity", psi, body, "--seed", "5", "--restarts", "4"};
  const std::string a = cli_out(args), b = cli_out(args);
  const std::vector<std::string> csv = {"--format", "csv", "capacity", psi, body, "--seed", "5", "--restarts", "4"};
  if (a != b || a.find("\"value\"") == std::string::npos || cli_out(csv) != cli_out(csv))
    failed.push_back("cli determinism");

  Outcome o;
  o.pass = failed.empty();
  o.detail = "scale " + fmt("%.1e", scale_err) + ", gradient " + fmt("%.1e", grad_err) + ", axioms " +
             std::to_string(ax.instances()) + " checks, bracket " + std::to_string(cont.instances()) +
             " checks, cli deterministic " + (a == b ? "yes" : "no");
  if (!failed.empty()) {
    o.detail += "; failed:";
    for (const std::string& f : failed) o.detail += " " + f;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"t(Psi) zeros", criterion1},
      {"closed forms", criterion2},
      {"dual solver on the disc", criterion3},
      {"rounded polygons vs arc oracle", criterion4},
      {"interleaved ball products", criterion5},
      {"billiards", criterion6},
      {"Brunn-Minkowski", criterion7},
      {"inradius/circumradius sandwich", criterion8},
      {"derivative along quadratic families", criterion9},
      {"property suites", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
