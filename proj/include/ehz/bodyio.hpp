#pragma once

// JSON descriptions of bodies and matrices, and CSV export of carriers.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ehz/bodies.hpp"
#include "ehz/result.hpp"

namespace ehz {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

inline double number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
  return j.get<double>();
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Vector json_vector(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

inline Matrix json_matrix(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorCode::ParseError, std::string(what) + " must be a nested array of rows");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error(ErrorCode::ParseError, std::string(what) + " rows differ in length");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number(j[i][k], what);
  }
  return m;
}

}  // namespace detail

/// Matrix from a nested row array or an object {"matrix": [...]}.
inline Matrix matrix_from_json(const Json& j) {
  if (j.is_object()) return detail::json_matrix(detail::field(j, "matrix"), "matrix");
  return detail::json_matrix(j, "matrix");
}

inline ConvexBody body_from_json(const Json& j) {
  using detail::field;
  using detail::json_matrix;
  using detail::json_vector;
  using detail::number;
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "body description must be an object");
  const Json& kj = field(j, "kind");
  if (!kj.is_string()) throw Error(ErrorCode::ParseError, "'kind' must be a string");
  const std::string kind = kj.get<std::string>();
  if (kind == "ball") {
    const double r = j.contains("radius") ? number(j.at("radius"), "radius") : 1.0;
    if (j.contains("center")) return ConvexBody::ball(r, json_vector(j.at("center"), "center"));
    return ConvexBody::ball(static_cast<int>(number(field(j, "dim"), "dim")), r);
  }
  if (kind == "ellipsoid") {
    if (j.contains("semi_axes")) return ConvexBody::ellipsoid_axes(json_vector(j.at("semi_axes"), "semi_axes"));
    return ConvexBody::ellipsoid(json_matrix(field(j, "S"), "S"));
  }
  if (kind == "polytope") return ConvexBody::polytope(json_matrix(field(j, "vertices"), "vertices").transpose());
  if (kind == "box") return ConvexBody::box(json_vector(field(j, "half_widths"), "half_widths"));
  if (kind == "product") {
    ConvexBody::Layout layout = ConvexBody::Layout::Cartesian;
    if (j.contains("layout")) {
      const std::string l = j.at("layout").get<std::string>();
      if (l == "symplectic") layout = ConvexBody::Layout::Symplectic;
      else if (l != "cartesian") throw Error(ErrorCode::ParseError, "layout must be 'cartesian' or 'symplectic'");
    }
    return ConvexBody::product(body_from_json(field(j, "left")), body_from_json(field(j, "right")), layout);
  }
  if (kind == "psum")
    return ConvexBody::psum(body_from_json(field(j, "left")), body_from_json(field(j, "right")), number(field(j, "p"), "p"));
  if (kind == "scaled") return body_from_json(field(j, "body")).scaled(number(field(j, "factor"), "factor"));
  if (kind == "translated") return body_from_json(field(j, "body")).translated(json_vector(field(j, "offset"), "offset"));
  if (kind == "rounded") return body_from_json(field(j, "body")).rounded(number(field(j, "epsilon"), "epsilon"));
  throw Error(ErrorCode::ParseError, "unknown body kind '" + kind + "'");
}

inline Json body_to_json(const ConvexBody& b) {
  const ConvexBody::Node& n = b.node();
  Json j;
  switch (n.kind) {
    case ConvexBody::Kind::Ball:
      j["kind"] = "ball";
      j["radius"] = n.radius;
      j["center"] = detail::vector_json(n.center);
      break;
    case ConvexBody::Kind::Ellipsoid:
      j["kind"] = "ellipsoid";
      j["S"] = detail::matrix_json(n.S);
      break;
    case ConvexBody::Kind::Polytope:
      j["kind"] = "polytope";
      j["vertices"] = detail::matrix_json(n.vertices.transpose());
      break;
    case ConvexBody::Kind::Product:
      j["kind"] = "product";
      j["layout"] = n.layout == ConvexBody::Layout::Symplectic ? "symplectic" : "cartesian";
      j["left"] = body_to_json(b.left());
      j["right"] = body_to_json(b.right());
      break;
    case ConvexBody::Kind::PSum:
      j["kind"] = "psum";
      j["p"] = n.p;
      j["left"] = body_to_json(b.left());
      j["right"] = body_to_json(b.right());
      break;
    case ConvexBody::Kind::Scaled:
      j["kind"] = "scaled";
      j["factor"] = n.factor;
      j["body"] = body_to_json(b.left());
      break;
    case ConvexBody::Kind::Translated:
      j["kind"] = "translated";
      j["offset"] = detail::vector_json(n.offset);
      j["body"] = body_to_json(b.left());
      break;
    case ConvexBody::Kind::Rounded:
      j["kind"] = "rounded";
      j["epsilon"] = n.epsilon;
      j["body"] = body_to_json(b.left());
      break;
  }
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline ConvexBody read_body(const std::string& path) { return body_from_json(read_json_file(path)); }
inline Matrix read_matrix(const std::string& path) { return matrix_from_json(read_json_file(path)); }

/// x rounded to 15 significant digits.
inline double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

/// Rounds every floating-point number in j to 15 significant digits.
inline void round_numbers(Json& j) {
  if (j.is_number_float()) {
    j = round15(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

/// Carrier samples as CSV: t, q_1..q_n, p_1..p_n.
inline void write_carrier_csv(std::ostream& os, const Carrier& c) {
  const Eigen::Index dim = c.points.empty() ? 0 : c.points.front().size();
  const Eigen::Index n = dim / 2;
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",q_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",p_" << i;
  os << '\n' << std::setprecision(15);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    os << c.times[k];
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << c.points[k](i);
    os << '\n';
  }
}

}  // namespace ehz
