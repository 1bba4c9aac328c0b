#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nullsim/cli_io.hpp"
#include "nullsim/errors.hpp"

using namespace nullsim;
namespace cli = nullsim::cli;

namespace {

ErrorCode parse_error_code(const std::string& text) {
  try {
    cli::parse_curve_spec(text);
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::BadInput;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Profiles, Parse) {
  EXPECT_EQ(cli::parse_profile("2")(5.0), 2.0);
  EXPECT_TRUE(cli::parse_profile("0.5").is_constant());
  EXPECT_NEAR(cli::parse_profile("2+sin")(1.0), 2.0 + std::sin(1.0), 1e-15);
  EXPECT_NEAR(cli::parse_profile("affine:1,0.25")(2.0), 1.5, 1e-15);
  EXPECT_NEAR(cli::parse_profile("sin:1,0.5")(0.3), 1.0 + 0.5 * std::sin(0.3), 1e-15);
  EXPECT_THROW(cli::parse_profile("cos"), GeometryError);
  EXPECT_THROW(cli::parse_profile("affine:1"), GeometryError);
  EXPECT_THROW(cli::parse_profile("2x"), GeometryError);
}

TEST(CurveSpec, ParseKinds) {
  auto b = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1","domain":[0,3],"samples":51})");
  EXPECT_EQ(b.kind, cli::CurveKind::Builtin);
  EXPECT_EQ(b.samples, 51u);
  EXPECT_EQ(b.domain.hi, 3.0);

  auto g = cli::parse_curve_spec(
      R"({"kind":"builtin","name":"geodesic","params":{"point":[1,0,0],"direction":[1,0,1]}})");
  EXPECT_EQ(g.direction, (Vec3{1, 0, 1}));

  auto f = cli::parse_curve_spec(R"({"kind":"frenet","kappa":-1,"tau":"sin:-0.5,0.1","domain":[0,2]})");
  EXPECT_EQ(f.kind, cli::CurveKind::Frenet);
  EXPECT_EQ(f.kappa(0.0), -1.0);
  EXPECT_EQ(f.initial.s, 0.0);

  auto fam = cli::parse_curve_spec(R"({"kind":"family","name":"helix","params":{"kappa":-2,"tau":-1}})");
  EXPECT_EQ(fam.family.kind, FamilyKind::Helix);
  EXPECT_EQ(fam.family.kappa0, -2.0);

  auto s = cli::parse_curve_spec(
      R"({"kind":"samples","s":[0,1,2,3,4],"points":[[0,1,0],[1,1,1],[2,1,2],[3,1,3],[4,1,4]]})");
  EXPECT_EQ(s.sample_points.size(), 5u);
  EXPECT_EQ(s.domain.hi, 4.0);
}

TEST(CurveSpec, Errors) {
  EXPECT_EQ(parse_error_code("{\"kind\": "), ErrorCode::ParseError);
  EXPECT_EQ(parse_error_code("[1,2]"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error_code(R"({"kind":"builtin","name":"spiral"})"), ErrorCode::UnknownBuiltin);
  EXPECT_EQ(parse_error_code(R"({"kind":"family","name":"circle"})"), ErrorCode::UnknownBuiltin);
  EXPECT_EQ(parse_error_code(R"({"name":"helix1"})"), ErrorCode::ValidationError);
  EXPECT_EQ(parse_error_code(R"({"kind":"builtin","name":"helix1","domain":[2,1]})"), ErrorCode::ValidationError);
  EXPECT_EQ(parse_error_code(R"({"kind":"builtin","name":"helix1","samples":3})"), ErrorCode::ValidationError);
  EXPECT_EQ(parse_error_code(R"({"kind":"builtin","name":"helix1","domain":"all"})"), ErrorCode::ValidationError);
  EXPECT_EQ(parse_error_code(R"({"kind":"samples","s":[0,1],"points":[[0,0,0],[1,1,0]]})"),
            ErrorCode::ValidationError);
  EXPECT_EQ(parse_error_code(R"({"kind":"frenet","kappa":-1})"), ErrorCode::ValidationError);
}

TEST(CurveSpec, SamplesCsv) {
  std::vector<double> s;
  std::vector<Vec3> p;
  cli::read_samples_csv("x1,s,x3,x2,extra\n0,0,0,1,9\n1,1,0.5,2,9\n", s, p);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(p[1], (Vec3{1, 2, 0.5}));
  EXPECT_THROW(cli::read_samples_csv("s,x1,x2\n0,0,0\n", s, p), GeometryError);
  try {
    cli::read_samples_csv("s,x1,x2,x3\n0,0,0,0\n1,a,0,0\n", s, p);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.283185307179586}) EXPECT_EQ(std::stod(cli::format_number(v)), v);
  EXPECT_EQ(cli::format_number(NAN), "nan");
  EXPECT_EQ(cli::format_number(0.5), "0.5");
}

TEST(RunFrame, CsvOutput) {
  auto spec = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1","domain":[0,1],"samples":11})");
  std::ostringstream out, err;
  ASSERT_EQ(cli::run_frame(spec, {}, out, err), cli::kExitOk) << err.str();
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 12u);
  EXPECT_EQ(l[0], "s,x1,x2,x3,alpha1,alpha2,alpha3,beta1,beta2,beta3,gamma1,gamma2,gamma3,kappa,tau,phi,f");
  EXPECT_EQ(l[1].substr(0, 8), "0,0,1,0,");
}

TEST(RunFrame, JsonOutputAndDeterminism) {
  auto spec = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1","domain":[0,1],"samples":7})");
  cli::RunConfig cfg;
  cfg.format = cli::OutputFormat::Json;
  std::ostringstream a, b, err;
  ASSERT_EQ(cli::run_frame(spec, cfg, a, err), 0);
  ASSERT_EQ(cli::run_frame(spec, cfg, b, err), 0);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("\"columns\""), std::string::npos);
}

TEST(RunFrame, ExitCodes) {
  std::ostringstream out, err;
  auto geodesic = cli::parse_curve_spec(R"({"kind":"builtin","name":"geodesic"})");
  EXPECT_EQ(cli::run_frame(geodesic, {}, out, err), cli::kExitDegenerate);
  EXPECT_NE(err.str().find("GeodesicDegeneracy"), std::string::npos);

  auto spec = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1"})");
  cli::RunConfig bad;
  bad.tol = -1.0;
  EXPECT_EQ(cli::run_frame(spec, bad, out, err), cli::kExitUsage);

  auto not_null = cli::parse_curve_spec(
      R"({"kind":"samples","s":[0,1,2,3,4],"points":[[0,0,0],[1,0,0],[2,0,0],[3,0,0],[4,0,0]]})");
  EXPECT_EQ(cli::run_frame(not_null, {}, out, err), cli::kExitUsage);
}

TEST(RunCheck, VerdictsAndAnchors) {
  auto a = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1","samples":201})");
  auto b = cli::parse_curve_spec(
      R"({"kind":"family","name":"helix","params":{"kappa":-2,"tau":-1},"domain":[0,3],"samples":201})");
  auto c = cli::parse_curve_spec(
      R"({"kind":"family","name":"helix","params":{"kappa":-2,"tau":-1.5},"domain":[0,3],"samples":201})");
  std::ostringstream out, err;
  cli::CheckRequest req{"ratio", 0.0, 0.0, std::nullopt};
  EXPECT_EQ(cli::run_check(a, b, req, {}, out, err), cli::kExitOk) << err.str();
  EXPECT_NE(out.str().find("\"verdict\": \"pass\""), std::string::npos);
  EXPECT_EQ(cli::run_check(a, c, req, {}, out, err), cli::kExitCriterionFail);
  req.mode = "normal";
  EXPECT_EQ(cli::run_check(a, b, req, {}, out, err), cli::kExitOk) << err.str();
  req.anchor_b.reset();
  EXPECT_EQ(cli::run_check(a, b, req, {}, out, err), cli::kExitUsage);
  EXPECT_NE(err.str().find("AnchorRequired"), std::string::npos);
}

TEST(RunSynthesize, Columns) {
  auto a = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1","samples":101})");
  std::ostringstream out, err;
  ASSERT_EQ(cli::run_synthesize(a, {"2", std::nullopt, std::nullopt, std::nullopt}, {}, out, err), 0) << err.str();
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 102u);
  EXPECT_NE(l[0].find(",s_a,lambda,kappa_scaling_residual,tau_scaling_residual"), std::string::npos);
  std::ostringstream out2;
  EXPECT_EQ(cli::run_synthesize(a, {"-1", std::nullopt, std::nullopt, std::nullopt}, {}, out2, err),
            cli::kExitUsage);
}

TEST(RunFamily, Verdict) {
  auto spec = cli::parse_curve_spec(R"({"kind":"family","name":"torsion_free","params":{"kappa":"sin:-2,0.5"}})");
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_family(spec, "2+sin", {}, out, err), cli::kExitOk) << err.str();
  EXPECT_NE(out.str().find("max_abs_tau_b"), std::string::npos);
  auto not_family = cli::parse_curve_spec(R"({"kind":"builtin","name":"helix1"})");
  EXPECT_EQ(cli::run_family(not_family, "2", {}, out, err), cli::kExitUsage);
}
