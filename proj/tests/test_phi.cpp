#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nullsim/errors.hpp"
#include "nullsim/families.hpp"
#include "nullsim/phi.hpp"

using namespace nullsim;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Interval kDomain{0.0, kTwoPi};

FramedCurve helix_frame(std::size_t n = 2001) {
  return frame_curve(builtin_helix1(kDomain), ParameterGrid::uniform(kDomain, n));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

TEST(Phi, Helix1Chart) {
  const auto fc = helix_frame();
  const auto chart = total_curvature(fc);
  EXPECT_EQ(chart.direction(), -1);
  for (std::size_t i = 0; i < chart.size(); ++i) {
    EXPECT_NEAR(chart.phi()[i], -chart.s()[i], 1e-12);
    EXPECT_NEAR(chart.f()[i], 0.5, 1e-12);
  }
  EXPECT_NEAR(chart.s_of_phi(-1.0), 1.0, 1e-10);
  EXPECT_NEAR(chart.phi_of_s(2.5), -2.5, 1e-10);
  EXPECT_NEAR(chart.phi_range().lo, -kTwoPi, 1e-12);
}

TEST(Phi, AnchoredChart) {
  const auto chart = total_curvature(helix_frame(), 1.5);
  EXPECT_NEAR(chart.phi_of_s(1.5), 0.0, 1e-12);
  EXPECT_NEAR(chart.phi_of_s(0.0), 1.5, 1e-12);
  EXPECT_THROW(total_curvature(helix_frame(), 7.0), GeometryError);
}

TEST(Phi, ChartRejectsVanishingOrSignChangingCurvature) {
  const auto grid = ParameterGrid::uniform(kDomain, 101);
  const auto flip = make_torsion_free(ScalarFunction::affine(-1.0, 0.5), helix1_initial_frame(), {0.0, 1.9}, 101);
  EXPECT_NO_THROW(total_curvature(flip));
  const auto fc = make_torsion_free(ScalarFunction::constant(-1.0), helix1_initial_frame(), kDomain, 101);
  std::vector<FrameSample> samples = fc.samples();
  samples[50].kappa = 1e-12;
  const FramedCurve vanishing(fc.source(), grid, samples);
  try {
    total_curvature(vanishing);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SignChange);
  }
  samples[50].kappa = -1e-12;
  try {
    total_curvature(FramedCurve(fc.source(), grid, samples));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::KappaVanishes);
    EXPECT_EQ(*e.where(), grid[50]);
  }
}

TEST(Phi, TangentOdeResidualHelix1) {
  const auto fc = helix_frame();
  EXPECT_LE(tangent_ode_residual(fc, total_curvature(fc)), 1e-6);
}

TEST(Phi, TangentOdeResidualDetectsCorruption) {
  const auto phi = linspace(0.0, kTwoPi, 2001);
  std::vector<Vec3> alpha, scaled, bent;
  std::vector<double> f(phi.size(), 0.5);
  for (double p : phi) {
    alpha.push_back({1.0, std::sin(p), std::cos(p)});
    scaled.push_back({1.0, 1.1 * std::sin(p), std::cos(p)});
    bent.push_back({1.0, std::sin(1.1 * p), std::cos(p)});
  }
  EXPECT_LE(tangent_ode_residual(phi, alpha, f), 1e-6);
  // The equation is linear and acts componentwise, so scaling a component
  // keeps it satisfied.
  EXPECT_LE(tangent_ode_residual(phi, scaled, f), 1e-6);
  // sin(1.1 phi) leaves -(1.1^3 - 1.1) cos(1.1 phi) behind.
  EXPECT_NEAR(tangent_ode_residual(phi, bent, f), 1.331 - 1.1, 1e-5);
}

TEST(Phi, TangentInitFromHelix1) {
  const auto init = tangent_init_from_frame(compute_frame_at(builtin_helix1(kDomain), 0.0), 0.5);
  EXPECT_LE(norm_inf(init.alpha - Vec3{1, 0, 1}), 1e-15);
  EXPECT_LE(norm_inf(init.dalpha - Vec3{0, 1, 0}), 1e-15);
  EXPECT_LE(norm_inf(init.d2alpha - Vec3{0, 0, -1}), 1e-15);
}

TEST(Phi, SolveTangentOdeHelix1) {
  const auto init = tangent_init_from_frame(compute_frame_at(builtin_helix1(kDomain), 0.0), 0.5);
  const auto nodes = linspace(0.0, kTwoPi, 629);
  const auto sol = solve_tangent_ode(ScalarFunction::constant(0.5), init, 0.0, nodes);
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double p = nodes[i];
    worst = std::max(worst, norm_inf(sol.alpha[i] - Vec3{1.0, std::sin(p), std::cos(p)}));
  }
  EXPECT_LE(worst, 1e-7);
  EXPECT_LE(sol.max_null_drift, 1e-8);
  EXPECT_LE(norm_inf(sol.field.alpha(1.0) - Vec3{1.0, std::sin(1.0), std::cos(1.0)}), 1e-7);
  EXPECT_THROW(sol.field.alpha(7.0), GeometryError);
}

TEST(Phi, SolveTangentOdeVariableRatioMatchesFrame) {
  const auto grid = ParameterGrid::uniform(kDomain, 2001);
  const auto kappa = ScalarFunction::constant(-1.0);
  const auto tau = ScalarFunction::sine(-0.5, 0.2);
  const auto fc = integrate_frenet(kappa, tau, helix1_initial_frame(), grid);
  const auto chart = total_curvature(fc);
  // phi = -s here, so f(phi) = tau(-phi) / kappa
  const ScalarFunction f([](double p) { return 0.5 - 0.2 * std::sin(-p); },
                         [](double p) { return 0.2 * std::cos(-p); });
  const auto sol = solve_tangent_ode(f, tangent_init_from_frame(fc[0], chart.f()[0]), 0.0, chart.phi());
  double worst = 0.0;
  for (std::size_t i = 0; i < fc.size(); ++i) worst = std::max(worst, norm_inf(sol.alpha[i] - fc[i].alpha));
  EXPECT_LE(worst, 1e-7);
  // third differences of sampled data on a 2001-point grid
  EXPECT_LE(tangent_ode_residual(fc, chart), 1e-5);
}

TEST(Phi, ReconstructCurve) {
  const auto init = tangent_init_from_frame(compute_frame_at(builtin_helix1(kDomain), 0.0), 0.5);
  const auto sol = solve_tangent_ode(ScalarFunction::constant(0.5), init, 0.0, linspace(-kTwoPi, 0.0, 101));
  const auto c = reconstruct_curve(sol.field, ScalarFunction::constant(-1.0), Vec3{0, 1, 0});
  EXPECT_NEAR(c.domain().lo, 0.0, 1e-12);
  EXPECT_NEAR(c.domain().hi, kTwoPi, 1e-12);
  const auto h = builtin_helix1(kDomain);
  for (double s = 0.0; s < kTwoPi; s += 0.3) {
    EXPECT_LE(norm_inf(c.position(s) - h.position(s)), 1e-7);
    EXPECT_LE(norm_inf(c.evaluate(s, 2) - h.evaluate(s, 2)), 1e-7);
  }
  EXPECT_THROW(reconstruct_curve(sol.field, ScalarFunction::sine(0.0, 1.0), Vec3{}), GeometryError);
}
