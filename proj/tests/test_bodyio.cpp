#include <gtest/gtest.h>

#include "ehz/bodyio.hpp"

using namespace ehz;

namespace {
Json parse(const char* s) { return Json::parse(s); }

void expect_same_support(const ConvexBody& a, const ConvexBody& b) {
  ASSERT_EQ(a.dim(), b.dim());
  for (const Vector& u : detail::sphere_directions(a.dim(), 64)) EXPECT_NEAR(a.support(u), b.support(u), 1e-12);
}
}  // namespace

TEST(BodyIo, Matrix) {
  const Matrix m = matrix_from_json(parse("[[1,2],[3,4]]"));
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(matrix_from_json(parse(R"({"matrix": [[0,-1],[1,0]]})"))(0, 1), -1.0);
  EXPECT_THROW(matrix_from_json(parse("[[1,2],[3]]")), Error);
}

TEST(BodyIo, Kinds) {
  EXPECT_NEAR(body_from_json(parse(R"({"kind":"ball","radius":2,"dim":2})")).support(Vector::Unit(2, 0)), 2.0, 1e-15);
  EXPECT_NEAR(body_from_json(parse(R"({"kind":"ellipsoid","semi_axes":[1,3]})")).support(Vector::Unit(2, 1)), 3.0,
              1e-12);
  EXPECT_NEAR(body_from_json(parse(R"({"kind":"box","half_widths":[1,2]})")).support(Vector::Unit(2, 1)), 2.0, 1e-15);
  const ConvexBody tri = body_from_json(parse(R"({"kind":"polytope","vertices":[[1,0],[0,1],[-1,-1]]})"));
  EXPECT_NEAR(tri.support(Vector::Unit(2, 0)), 1.0, 1e-15);
  const ConvexBody prod = body_from_json(parse(
      R"({"kind":"product","layout":"symplectic","left":{"kind":"ball","dim":2},"right":{"kind":"ball","dim":2,"radius":2}})"));
  EXPECT_EQ(prod.dim(), 4);
  EXPECT_NEAR(prod.support(Vector::Unit(4, 1)), 2.0, 1e-15);
}

TEST(BodyIo, ParseErrors) {
  for (const char* s : {R"({"kind":"blob"})", R"({"radius":1})", R"([1,2])", R"({"kind":"box","half_widths":"x"})",
                        R"({"kind":"product","layout":"diag","left":{"kind":"ball","dim":2},"right":{"kind":"ball","dim":2}})"}) {
    try {
      body_from_json(parse(s));
      ADD_FAILURE() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << s;
    }
  }
}

TEST(BodyIo, RoundTrip) {
  const ConvexBody b = ConvexBody::psum(ConvexBody::box(Vector::Ones(2)).rounded(0.1),
                                        ConvexBody::ellipsoid_axes(Vector::Constant(2, 0.5)).scaled(2.0), 2.0)
                           .translated(Vector::Constant(2, 0.1));
  const Json j = body_to_json(b);
  expect_same_support(b, body_from_json(Json::parse(j.dump())));
}

TEST(BodyIo, Round15) {
  EXPECT_EQ(round15(0.1 + 0.2), 0.3);
  Json j = {{"a", 1.0 / 3.0}, {"b", {2.0 / 3.0}}, {"c", 7}};
  round_numbers(j);
  EXPECT_EQ(j["a"].get<double>(), 0.333333333333333);
  EXPECT_EQ(j["c"].get<int>(), 7);
}

TEST(BodyIo, CarrierCsvHeader) {
  Carrier c;
  c.times = {0.0};
  c.points = {Vector::Zero(4)};
  std::ostringstream os;
  write_carrier_csv(os, c);
  EXPECT_EQ(os.str(), "t,q_1,q_2,p_1,p_2\n0,0,0,0,0\n");
}
