#pragma once

// Command-line front end. run() is the whole program; tools/ehz.cpp only
// forwards argv so that tests can drive it in-process.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ehz/billiards.hpp"
#include "ehz/bodyio.hpp"
#include "ehz/closedform.hpp"
#include "ehz/dualsolver.hpp"
#include "ehz/oracle2d.hpp"
#include "ehz/verify.hpp"

namespace ehz::cli {

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotSymplectic:
    case ErrorCode::NotOrthogonal:
    case ErrorCode::SingularMatrix:
    case ErrorCode::OriginNotInterior: return 2;
    case ErrorCode::NoZeroFound: return 3;
    case ErrorCode::NoFixedInteriorPoint: return 4;
    case ErrorCode::NonConvergence: return 5;
    case ErrorCode::AssumptionViolated: return 6;
    case ErrorCode::CarrierResidualTooLarge: return 7;
    case ErrorCode::ClassificationAmbiguous: return 8;
    case ErrorCode::ZeroDenominator: return 9;
  }
  return 1;
}

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    os << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

inline Json diagnostics_json(const CapacityResult& r) {
  Json d = Json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  return d;
}

inline Json result_json(const CapacityResult& r) {
  Json j;
  j["value"] = r.value;
  j["method"] = to_string(r.method);
  j["diagnostics"] = diagnostics_json(r);
  return j;
}

inline void write_carrier(const std::string& path, const CapacityResult& r) {
  if (path.empty()) return;
  if (!r.carrier) throw Error(ErrorCode::InvalidArgument, "no carrier to emit");
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  write_carrier_csv(f, *r.carrier);
}

struct SolverFlags {
  SolverOptions opts;
  void attach(CLI::App* app) {
    app->add_option("--p", opts.p, "dual exponent p >= 1")->capture_default_str();
    app->add_option("--modes", opts.modes, "lattice periods kept per zero family")->capture_default_str();
    app->add_option("--quad", opts.quad, "trapezoid intervals; 0 means 8 x max(modes, 8)")->capture_default_str();
    app->add_option("--restarts", opts.restarts, "multistart count")->capture_default_str();
    app->add_option("--seed", opts.seed, "random seed")->capture_default_str();
    app->add_option("--round-eps", opts.round_eps,
                    "rounding radius for nonsmooth bodies; negative means 1e-3 x inradius, 0 disables")
        ->capture_default_str();
  }
  Json json() const {
    return Json{{"p", opts.p},           {"modes", opts.modes},   {"quad", opts.quad},
                {"restarts", opts.restarts}, {"seed", opts.seed}, {"round_eps", opts.round_eps}};
  }
};

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized EHZ capacities of convex bodies"};
  app.require_subcommand(1);
  std::string format = "json";
  bool timestamps = false;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--timestamps", timestamps, "add start/end times to the record (breaks byte-identical output)");
  app.fallthrough();

  std::string psi_file, body_file, s_file, a_file, lambda_file, carrier_out, bounces_out, suite, out_dir;
  detail::SolverFlags sf;
  double theta = kTwoPi, delta_act = 0.1, psum_p = 1.0;
  int samples = 4096, count = 4;
  std::uint64_t vseed = 0;

  CLI::App* tpsi = app.add_subcommand("tpsi", "smallest zero t(Psi) of det(Psi - exp(sJ)) and all zeros in (0, 2pi]");
  tpsi->add_option("psi", psi_file, "JSON matrix file for Psi")->required();

  CLI::App* ell = app.add_subcommand("ellipsoid", "capacity of {1/2 <Sz, z> < 1} by root finding");
  ell->add_option("psi", psi_file, "JSON matrix file for Psi")->required();
  ell->add_option("S", s_file, "JSON matrix file for S")->required();
  ell->add_option("--emit-carrier", carrier_out, "write the carrier as CSV");

  CLI::App* cap = app.add_subcommand("capacity", "capacity of a body with the dual solver");
  cap->add_option("psi", psi_file, "JSON matrix file for Psi")->required();
  cap->add_option("body", body_file, "JSON body file")->required();
  sf.attach(cap);
  cap->add_option("--emit-carrier", carrier_out, "write the carrier as CSV");

  CLI::App* bil = app.add_subcommand("billiard", "xi^A(Delta) = capacity of Delta x Lambda under diag(A, A^-t)");
  bil->add_option("A", a_file, "JSON matrix file for A")->required();
  bil->add_option("delta", body_file, "JSON body file for Delta")->required();
  bil->add_option("--lambda", lambda_file, "JSON body file for Lambda (default: unit ball)");
  bil->add_option("--delta-act", delta_act, "activity threshold on gauges for bounce classification")
      ->capture_default_str();
  bil->add_option("--emit-bounces", bounces_out, "write the bounce points as CSV");
  bil->add_option("--emit-carrier", carrier_out, "write the carrier as CSV");
  sf.attach(bil);

  CLI::App* ver = app.add_subcommand("verify", "property suites on a seeded corpus");
  ver->add_option("suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"axioms", "brunn-minkowski", "croke-weinstein", "neduv", "continuity"}));
  ver->add_option("--seed", vseed, "corpus seed")->capture_default_str();
  ver->add_option("--count", count, "corpus size")->capture_default_str();
  ver->add_option("--psum", psum_p, "p of the p-sum for brunn-minkowski")->capture_default_str();
  ver->add_option("--out", out_dir, "also write <suite>.json into this directory");

  CLI::App* orc = app.add_subcommand("oracle2d", "planar capacity under R(theta) by boundary arcs");
  orc->add_option("body", body_file, "JSON body file (2D)")->required();
  orc->add_option("--theta", theta, "rotation angle in (0, 2pi]")->capture_default_str();
  orc->add_option("--samples", samples, "boundary samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Json rec;
  const std::string start = timestamps ? detail::utc_now() : std::string();
  try {
    if (*tpsi) {
      const SymplecticMap psi = SymplecticMap::make(read_matrix(psi_file));
      const ZeroSet zs = zeros_in_period(psi);
      rec["command"] = "tpsi";
      rec["inputs"] = {{"psi", psi_file}};
      rec["t"] = zs.zeros.front();
      rec["zeros"] = zs.zeros;
      rec["multiplicities"] = zs.multiplicities;
    } else if (*ell) {
      const SymplecticMap psi = SymplecticMap::make(read_matrix(psi_file));
      const CapacityResult r = capacity_ellipsoid(psi, read_matrix(s_file));
      detail::write_carrier(carrier_out, r);
      rec["command"] = "ellipsoid";
      rec["inputs"] = {{"psi", psi_file}, {"S", s_file}};
      rec.update(detail::result_json(r));
    } else if (*cap) {
      const SymplecticMap psi = SymplecticMap::make(read_matrix(psi_file));
      SolverOptions o = sf.opts;
      o.extract_carrier = !carrier_out.empty();
      const CapacityResult r = minimize_capacity(psi, read_body(body_file), o);
      detail::write_carrier(carrier_out, r);
      rec["command"] = "capacity";
      rec["inputs"] = {{"psi", psi_file}, {"body", body_file}};
      rec["options"] = sf.json();
      rec.update(detail::result_json(r));
    } else if (*bil) {
      const Matrix a = read_matrix(a_file);
      const ConvexBody delta = read_body(body_file);
      const ConvexBody lambda = lambda_file.empty() ? ConvexBody::ball(delta.dim()) : read_body(lambda_file);
      const CapacityResult r = xi(a, delta, lambda, sf.opts);
      detail::write_carrier(carrier_out, r);
      const BounceDecomposition bd = extract_bounces(*r.carrier, a, delta, lambda, delta_act);
      if (!bounces_out.empty()) {
        std::ofstream f(bounces_out);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + bounces_out + "'");
        write_bounces_csv(f, bd, lambda);
      }
      rec["command"] = "billiard";
      rec["inputs"] = {{"A", a_file}, {"delta", body_file}, {"lambda", lambda_file.empty() ? "unit ball" : lambda_file}};
      rec["options"] = sf.json();
      rec["options"]["delta_act"] = delta_act;
      rec.update(detail::result_json(r));
      Json pts = Json::array();
      for (const Vector& q : bd.bounce_points) pts.push_back(ehz::detail::vector_json(q));
      rec["bounces"] = {{"m", bd.m},
                        {"points", pts},
                        {"total_h_length", bd.total_h_length},
                        {"action", bd.action},
                        {"max_p_spread", bd.max_p_spread}};
      const Vector center = r.carrier->fixed_point.head(delta.dim());
      const BodyStats st = stats(delta, center);
      const BilliardBounds bb = billiard_bounds(a, delta, st.inradius, st.circumradius, center);
      rec["bounds"] = {{"lower", bb.lower}, {"upper", bb.upper}, {"t_psi", bb.t_psi}};
      if (std::isfinite(bb.width_upper)) rec["bounds"]["width_upper"] = bb.width_upper;
    } else if (*ver) {
      const SymplecticMap id = SymplecticMap::identity(1);
      PropertyReport rep;
      const auto corpus = make_corpus(vseed, count);
      if (suite == "axioms") {
        rep = check_axioms(corpus, id);
      } else if (suite == "brunn-minkowski") {
        std::vector<std::pair<CorpusBody, CorpusBody>> pairs;
        for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) pairs.push_back({corpus[i], corpus[i + 1]});
        pairs.push_back({corpus.front(), corpus.front()});
        rep = check_brunn_minkowski(pairs, id, psum_p);
      } else if (suite == "croke-weinstein") {
        std::vector<SolvedBody> solved;
        for (const CorpusBody& c : corpus) {
          SolverOptions o;
          o.extract_carrier = false;
          solved.push_back({c.name, c.body, minimize_capacity(id, c.body, o).value});
        }
        rep = check_croke_weinstein(solved, id, Vector::Zero(2));
      } else if (suite == "neduv") {
        rep = check_neduv(2.0 * Matrix::Identity(2, 2), id);
        rep.merge(check_neduv(2.0 * Matrix::Identity(2, 2), SymplecticMap::rotation(1.0)));
        Rng rng(vseed);
        for (int i = 0; i < count; ++i) {
          Matrix m(2, 2);
          m << rng.normal(), rng.normal(), rng.normal(), rng.normal();
          rep.merge(check_neduv(m * m.transpose() + 0.5 * Matrix::Identity(2, 2), id));
        }
      } else {
        rep = check_continuity(corpus.front(), id, 0.0);
        for (const CorpusBody& c : corpus) rep.merge(check_continuity(c, id, 0.01));
      }
      rec["command"] = "verify";
      rec["inputs"] = {{"suite", suite}, {"seed", vseed}, {"count", count}};
      rec["report"] = rep.to_json();
      if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        std::ofstream f(out_dir + "/" + suite + ".json");
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write into '" + out_dir + "'");
        Json r = rep.to_json();
        round_numbers(r);
        f << r.dump(2) << '\n';
      }
    } else if (*orc) {
      const CapacityResult r = arc_capacity_2d(read_body(body_file), theta, samples);
      rec["command"] = "oracle2d";
      rec["inputs"] = {{"body", body_file}, {"theta", theta}, {"samples", samples}};
      rec.update(detail::result_json(r));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return 2;
  }
  if (timestamps) rec["timestamps"] = {{"start", start}, {"end", detail::utc_now()}};
  round_numbers(rec);
  if (format == "csv") {
    out << "field,value\n";
    detail::flatten(rec, "", out);
  } else {
    out << rec.dump(2) << '\n';
  }
  return 0;
}

}  // namespace ehz::cli
