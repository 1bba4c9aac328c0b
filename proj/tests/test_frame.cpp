#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nullsim/errors.hpp"
#include "nullsim/families.hpp"
#include "nullsim/frame.hpp"
#include "support/oracle.hpp"

using namespace nullsim;
using nullsim::testing::oracle_frame;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Interval kDomain{0.0, kTwoPi};

FramedCurve sampled_helix_frame() {
  const auto grid = ParameterGrid::uniform(kDomain, 2001);
  const auto curve = NullCurve::sampled("h1", grid, builtin_helix1(kDomain).positions(grid));
  return frame_curve(curve, grid);
}

}  // namespace

// The jet oracle is checked against hand-derived closed forms before its
// numbers are trusted anywhere else.
TEST(FrameOracle, Helix1ClosedForm) {
  for (double t : {0.0, 0.7, 2.0, 5.1}) {
    const auto o = oracle_frame(nullsim::testing::helix1_jet, t);
    EXPECT_NEAR(o.pseudo_arc, 1.0, 1e-14);
    EXPECT_LE(norm_inf(o.alpha - Vec3{1.0, -std::sin(t), std::cos(t)}), 1e-14);
    EXPECT_LE(norm_inf(o.beta - Vec3{0.0, std::cos(t), std::sin(t)}), 1e-14);
    EXPECT_LE(norm_inf(o.gamma - Vec3{-0.5, -0.5 * std::sin(t), 0.5 * std::cos(t)}), 1e-14);
    EXPECT_NEAR(o.kappa, -1.0, 1e-14);
    EXPECT_NEAR(o.tau, -0.5, 1e-14);
  }
}

TEST(Frame, Helix1MatchesOracle) {
  const auto h = builtin_helix1(kDomain);
  for (double t = 0.0; t <= kTwoPi; t += 0.37) {
    const auto o = oracle_frame(nullsim::testing::helix1_jet, t);
    const auto f = compute_frame_at(h, t);
    EXPECT_LE(norm_inf(f.alpha - o.alpha), 1e-12);
    EXPECT_LE(norm_inf(f.beta - o.beta), 1e-12);
    EXPECT_LE(norm_inf(f.gamma - o.gamma), 1e-12);
    EXPECT_NEAR(f.kappa, o.kappa, 1e-12);
    EXPECT_NEAR(f.tau, o.tau, 1e-12);
  }
}

TEST(Frame, Helix1Invariants) {
  const auto fc = frame_curve(builtin_helix1(kDomain), ParameterGrid::uniform(kDomain, 2001));
  EXPECT_EQ(fc.branch_flips(), 0u);
  for (const auto& f : fc.samples()) {
    EXPECT_NEAR(f.kappa, -1.0, 1e-12);
    EXPECT_NEAR(f.tau, -0.5, 1e-12);
    EXPECT_NEAR(f.tau / f.kappa, 0.5, 1e-12);
  }
  EXPECT_LE(fc.relations().max_scalar(), 1e-12);
  EXPECT_LE(fc.relations().beta_cross, 1e-12);
}

TEST(Frame, JetTorsionCrossCheck) {
  const auto jet = compute_frame_jet(builtin_helix1(kDomain), 1.1);
  EXPECT_NEAR(jet.tau_from_beta, jet.tau_from_gamma, 1e-12);
  EXPECT_LE(norm_inf(jet.dalpha - jet.frame.kappa * jet.frame.beta), 1e-12);
  EXPECT_LE(norm_inf(jet.dgamma - jet.frame.tau * jet.frame.beta), 1e-12);
  EXPECT_LE(norm_inf(jet.dbeta + jet.frame.tau * jet.frame.alpha + jet.frame.kappa * jet.frame.gamma), 1e-12);
}

TEST(Frame, SampledHelix1) {
  const auto fc = sampled_helix_frame();
  EXPECT_LE(fc.relations().max_scalar(), 1e-5);
  double dk = 0.0, dt = 0.0;
  for (const auto& f : fc.samples()) {
    dk = std::max(dk, std::abs(f.kappa + 1.0));
    dt = std::max(dt, std::abs(f.tau + 0.5));
  }
  EXPECT_LE(dk, 1e-6);
  EXPECT_LE(dt, 1e-5);
  EXPECT_LE(frenet_residuals(fc).max_frenet(), 1e-4);
}

TEST(Frame, FrenetResidualsAnalytic) {
  const auto fc = frame_curve(builtin_helix1(kDomain), ParameterGrid::uniform(kDomain, 2001));
  EXPECT_LE(frenet_residuals(fc).max_frenet(), 1e-8);
}

TEST(Frame, LorentzCovariance) {
  const auto m = LinearMap3::boost_x3(0.6).compose(LinearMap3::rotation_x1(-0.9));
  const auto h = builtin_helix1(kDomain);
  const auto moved = transformed(h, m, Vec3{3, 0, 1});
  for (double t : {0.2, 2.5, 6.0}) {
    const auto f = compute_frame_at(h, t);
    const auto g = compute_frame_at(moved, t);
    EXPECT_NEAR(g.kappa, f.kappa, 1e-12);
    EXPECT_NEAR(g.tau, f.tau, 1e-12);
    EXPECT_LE(norm_inf(g.beta - m(f.beta)), 1e-12);
    EXPECT_LE(norm_inf(g.gamma - m(f.gamma)), 1e-12);
  }
}

TEST(Frame, GeodesicIsDegenerate) {
  const auto line = make_null_geodesic(Vec3{}, Vec3{1, 0, 1}, {0.0, 1.0});
  try {
    compute_frame_at(line, 0.5);
    FAIL() << "expected GeodesicDegeneracy";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::GeodesicDegeneracy);
    ASSERT_TRUE(e.where());
    EXPECT_EQ(*e.where(), 0.5);
  }
  EXPECT_EQ(classify(line, ParameterGrid::uniform({0.0, 1.0}, 11), 1e-6),
            std::vector<CurveClass>{CurveClass::Geodesic});
}

TEST(Frame, NonNullCurveRejected) {
  const NullCurve c = NullCurve::analytic("spacelike", {0.0, 1.0},
                                          {[](double s) { return Vec3{0, s, 0}; }, [](double) { return kE2; },
                                           [](double) { return Vec3{}; }, [](double) { return Vec3{}; }});
  try {
    compute_frame_at(c, 0.3);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNull);
  }
}

TEST(Frame, IntegrateFrenetRoundTrip) {
  const auto grid = ParameterGrid::uniform(kDomain, 801);
  const auto fc = integrate_frenet(ScalarFunction::constant(-1.0), ScalarFunction::constant(-0.5),
                                   helix1_initial_frame(), grid, FrenetOptions{.origin = Vec3{0, 1, 0}});
  const auto h = builtin_helix1(kDomain);
  double dp = 0.0, dk = 0.0, dt = 0.0;
  for (const auto& f : fc.samples()) {
    dp = std::max(dp, norm_inf(fc.source().position(f.s) - h.position(f.s)));
    dk = std::max(dk, std::abs(f.kappa + 1.0));
    dt = std::max(dt, std::abs(f.tau + 0.5));
  }
  EXPECT_LE(dp, 1e-7);
  EXPECT_LE(dk, 1e-6);
  EXPECT_LE(dt, 1e-6);
}

TEST(Frame, IntegrateFrenetFromInteriorAnchor) {
  const auto grid = ParameterGrid::uniform(kDomain, 401);
  const auto h = builtin_helix1(kDomain);
  auto start = compute_frame_at(h, 2.0);
  const auto fc = integrate_frenet(ScalarFunction::constant(-1.0), ScalarFunction::constant(-0.5), start, grid,
                                   FrenetOptions{.origin = h.position(2.0)});
  EXPECT_LE(norm_inf(fc.source().position(0.0) - h.position(0.0)), 1e-7);
  EXPECT_LE(norm_inf(fc.source().position(kTwoPi) - h.position(kTwoPi)), 1e-7);
}

TEST(Frame, IntegrateFrenetVariableCurvatures) {
  const auto grid = ParameterGrid::uniform(kDomain, 801);
  const auto kappa = ScalarFunction::sine(-1.5, -0.5);
  const auto tau = ScalarFunction::affine(-0.3, -0.05);
  const auto fc = integrate_frenet(kappa, tau, helix1_initial_frame(), grid);
  EXPECT_TRUE(nullity_check(fc.source(), grid, 1e-9).passed);
  for (const auto& f : fc.samples()) {
    EXPECT_NEAR(f.kappa, kappa(f.s), 1e-7);
    EXPECT_NEAR(f.tau, tau(f.s), 1e-6);
  }
  EXPECT_LE(fc.relations().max_scalar(), 1e-8);
  EXPECT_EQ(classify(fc, 1e-6), std::vector<CurveClass>{CurveClass::Generic});
}

TEST(Frame, IntegrateFrenetValidation) {
  const auto grid = ParameterGrid::uniform(kDomain, 101);
  auto bad = helix1_initial_frame();
  bad.gamma = bad.gamma * 1.01;
  auto code = [&](auto&& f) {
    try {
      f();
    } catch (const GeometryError& e) {
      return e.code();
    }
    return ErrorCode::BadInput;
  };
  EXPECT_EQ(code([&] {
              integrate_frenet(ScalarFunction::constant(-1), ScalarFunction::constant(0), bad, grid);
            }),
            ErrorCode::BadInitialFrame);
  try {
    integrate_frenet(ScalarFunction::sine(0.0, 1.0), ScalarFunction::constant(0), helix1_initial_frame(), grid);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadInput);
  }
}

TEST(Frame, Classification) {
  const auto grid = ParameterGrid::uniform(kDomain, 201);
  const auto helix = frame_curve(builtin_helix1(kDomain), grid);
  EXPECT_EQ(classify(helix, 1e-8), std::vector<CurveClass>{CurveClass::Helix});
  const auto flat = make_torsion_free(ScalarFunction::sine(-2.0, 0.5), helix1_initial_frame(), kDomain, 201);
  EXPECT_EQ(classify(flat, 1e-8), std::vector<CurveClass>{CurveClass::TorsionFree});
}
