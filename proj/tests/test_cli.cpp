#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ehz/cli.hpp"

using namespace ehz;

namespace {
struct Out {
  int code;
  std::string out, err;
};

Out run(std::vector<std::string> args) {
  args.insert(args.begin(), "ehz");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& f) { return std::string(EHZ_DATA_DIR) + "/" + f; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p.string();
}
}  // namespace

TEST(Cli, TpsiJson) {
  const Out o = run({"tpsi", data("minus_identity2.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j["t"].get<double>(), std::numbers::pi, 1e-9);
  EXPECT_EQ(j["command"], "tpsi");
}

TEST(Cli, CsvFormat) {
  const Out o = run({"--format", "csv", "tpsi", data("identity2.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "field,value");
  EXPECT_NE(o.out.find("\nt,6.283185307"), std::string::npos);
}

TEST(Cli, EllipsoidAndCarrier) {
  const std::string s = temp_file("ehz_cli_S.json", "[[2,0],[0,0.5]]");
  const auto carrier = (std::filesystem::temp_directory_path() / "ehz_cli_carrier.csv").string();
  const Out o = run({"ellipsoid", data("identity2.json"), s, "--emit-carrier", carrier});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(Json::parse(o.out)["value"].get<double>(), 2.0 * std::numbers::pi, 1e-8);
  std::ifstream in(carrier);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,q_1,p_1");
}

TEST(Cli, CapacityIsDeterministic) {
  const std::vector<std::string> args = {"capacity", data("rotation_pi3.json"), data("ellipse_1_2.json"),
                                         "--restarts", "3", "--seed", "7"};
  const Out a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("timestamps"), std::string::npos);
}

TEST(Cli, TimestampsAreOptIn) {
  const Out o = run({"--timestamps", "tpsi", data("identity2.json")});
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(Json::parse(o.out).contains("timestamps"));
}

TEST(Cli, Oracle2d) {
  const Out o = run({"oracle2d", data("square.json"), "--theta", "3.141592653589793"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(Json::parse(o.out)["value"].get<double>(), 2.0, 1e-9);
}

TEST(Cli, VerifyWritesReport) {
  const auto dir = std::filesystem::temp_directory_path() / "ehz_cli_verify";
  std::filesystem::remove_all(dir);
  const Out o = run({"verify", "neduv", "--out", dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(Json::parse(o.out)["report"]["pass"].get<bool>());
  EXPECT_FALSE(std::filesystem::is_empty(dir));
}

TEST(Cli, HelpShowsDefaults) {
  const Out o = run({"capacity", "--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("--modes INT [32]"), std::string::npos);
  EXPECT_NE(o.out.find("--restarts INT [16]"), std::string::npos);
}

TEST(Cli, ErrorCodeMapping) {
  EXPECT_EQ(cli::exit_code(ErrorCode::ParseError), 2);
  EXPECT_EQ(cli::exit_code(ErrorCode::NoZeroFound), 3);
  EXPECT_EQ(cli::exit_code(ErrorCode::NoFixedInteriorPoint), 4);
  EXPECT_EQ(cli::exit_code(ErrorCode::NonConvergence), 5);
  EXPECT_EQ(cli::exit_code(ErrorCode::AssumptionViolated), 6);
  EXPECT_EQ(cli::exit_code(ErrorCode::CarrierResidualTooLarge), 7);
  EXPECT_EQ(cli::exit_code(ErrorCode::ClassificationAmbiguous), 8);
  EXPECT_EQ(cli::exit_code(ErrorCode::ZeroDenominator), 9);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"tpsi", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"tpsi", temp_file("ehz_cli_bad.json", "[[1,2],[3]]")}).code, 2);
  EXPECT_EQ(run({"tpsi", temp_file("ehz_cli_shear.json", "[[1,1],[0,2]]")}).code, 2);
  const std::string off = temp_file("ehz_cli_off.json", R"({"kind":"ball","radius":1,"center":[3,0]})");
  EXPECT_EQ(run({"capacity", data("rotation_pi3.json"), off}).code, 4);
  const Out bil = run({"billiard", temp_file("ehz_cli_rot.json", "[[0,-1],[1,0]]"), off});
  EXPECT_EQ(bil.code, 6) << bil.err;
  EXPECT_EQ(bil.err.rfind("error: ", 0), 0u);
}
