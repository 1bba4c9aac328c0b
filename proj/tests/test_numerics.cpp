#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nullsim/errors.hpp"
#include "nullsim/numerics.hpp"
#include "nullsim/ode.hpp"

using namespace nullsim;

TEST(Numerics, FornbergWeightsCentralDifference) {
  const std::vector<double> x{-1.0, 0.0, 1.0};
  const auto w = numerics::fd_weights(x, 0.0, 2);
  EXPECT_NEAR(w[1][0], -0.5, 1e-15);
  EXPECT_NEAR(w[1][1], 0.0, 1e-15);
  EXPECT_NEAR(w[1][2], 0.5, 1e-15);
  EXPECT_NEAR(w[2][0], 1.0, 1e-15);
  EXPECT_NEAR(w[2][1], -2.0, 1e-15);
  EXPECT_NEAR(w[2][2], 1.0, 1e-15);
}

TEST(Numerics, SevenPointStencilExactOnSextics) {
  std::vector<double> s, v;
  for (int i = 0; i < 40; ++i) {
    const double x = 0.1 * i;
    s.push_back(x);
    v.push_back(1.0 - 2.0 * x + 0.5 * std::pow(x, 3) - 0.1 * std::pow(x, 6));
  }
  const auto d1 = numerics::differentiate_samples<double>(s, v, 1, 7);
  const auto d3 = numerics::differentiate_samples<double>(s, v, 3, 7);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s[i];
    EXPECT_NEAR(d1[i], -2.0 + 1.5 * x * x - 0.6 * std::pow(x, 5), 1e-8);
    EXPECT_NEAR(d3[i], 3.0 - 12.0 * x * x * x, 1e-6);
  }
}

TEST(Numerics, StencilConvergesOnSmoothData) {
  auto max_err = [](int n) {
    std::vector<double> s, v;
    for (int i = 0; i <= n; ++i) {
      s.push_back(2.0 * i / n);
      v.push_back(std::sin(s.back()));
    }
    const auto d = numerics::differentiate_samples<double>(s, v, 1, 7);
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(d[i] - std::cos(s[i])));
    return e;
  };
  // sixth order: doubling the resolution gains about 2^6
  EXPECT_GT(max_err(40) / max_err(80), 30.0);
}

TEST(Numerics, GaussLegendreExactToDegree15) {
  auto p = [](double x) { return std::pow(x, 15) - 3.0 * std::pow(x, 8) + x; };
  auto P = [](double x) { return std::pow(x, 16) / 16.0 - std::pow(x, 9) / 3.0 + x * x / 2.0; };
  EXPECT_NEAR(numerics::gauss_legendre<double>(p, -0.3, 1.2), P(1.2) - P(-0.3), 1e-13);
}

TEST(Numerics, CumulativeIntegral) {
  const numerics::CumulativeIntegral<double> c([](double s) { return std::cos(s); }, {0.0, 4.0}, 64);
  for (double x : {0.0, 0.3, 1.0, 2.71, 4.0}) EXPECT_NEAR(c(x), std::sin(x), 1e-14);

  std::vector<double> s, v;
  for (int i = 0; i <= 200; ++i) {
    s.push_back(0.02 * i);
    v.push_back(std::exp(s.back()));
  }
  const auto ci = numerics::cumulative_integral(s, v);
  for (std::size_t i = 0; i < s.size(); i += 17) EXPECT_NEAR(ci[i], std::exp(s[i]) - 1.0, 1e-11);
}

TEST(Numerics, ScalarFunctionFallbackDerivative) {
  const ScalarFunction f([](double s) { return std::sin(2.0 * s); });
  EXPECT_NEAR(f.derivative(0.4), 2.0 * std::cos(0.8), 1e-9);
  EXPECT_TRUE(ScalarFunction::constant(3.0).is_constant());
  EXPECT_EQ(ScalarFunction::affine(1.0, 0.5).derivative(7.0), 0.5);
  EXPECT_NEAR(ScalarFunction::sine(2.0, 1.0)(1.0), 2.0 + std::sin(1.0), 0.0);
}

namespace {

// y'' = -y as a first-order system
const ode::Rhs kOscillator = [](double, const ode::State& y, ode::State& dy) {
  dy[0] = y[1];
  dy[1] = -y[0];
};

}  // namespace

TEST(DormandPrince, AdaptiveAccuracyAndDenseOutput) {
  const ode::DormandPrince solver;
  const auto sol = solver.solve(kOscillator, 0.0, {0.0, 1.0}, 10.0);
  EXPECT_GT(sol.steps(), 10u);
  for (double t = 0.0; t <= 10.0; t += 0.0137) {
    const auto y = sol(t);
    EXPECT_NEAR(y[0], std::sin(t), 1e-8);
    EXPECT_NEAR(y[1], std::cos(t), 1e-8);
  }
}

TEST(DormandPrince, BackwardIntegration) {
  const ode::DormandPrince solver;
  const auto sol = solver.solve(kOscillator, 1.0, {std::sin(1.0), std::cos(1.0)}, -3.0);
  EXPECT_TRUE(sol.covers(-2.0));
  EXPECT_FALSE(sol.covers(1.5));
  EXPECT_NEAR(sol(-3.0)[0], std::sin(-3.0), 1e-9);
  EXPECT_NEAR(sol(-1.234)[1], std::cos(-1.234), 1e-8);
}

TEST(DormandPrince, FixedStepFifthOrderConvergence) {
  auto err = [](double h) {
    ode::Options opt;
    opt.fixed_step = h;
    const auto sol = ode::DormandPrince(opt).solve(kOscillator, 0.0, {0.0, 1.0}, 4.0);
    return std::abs(sol(4.0)[0] - std::sin(4.0));
  };
  const double ratio = err(0.2) / err(0.1);
  EXPECT_GT(ratio, 25.0);
  EXPECT_LT(ratio, 40.0);
}

TEST(DormandPrince, ProjectionHookApplied) {
  ode::Options opt;
  int calls = 0;
  opt.projection = [&](double, ode::State& y) {
    ++calls;
    const double r = std::hypot(y[0], y[1]);
    y[0] /= r;
    y[1] /= r;
  };
  const auto sol = ode::DormandPrince(opt).solve(kOscillator, 0.0, {0.0, 1.0}, 3.0);
  EXPECT_GT(calls, 0);
  EXPECT_NEAR(std::hypot(sol(3.0)[0], sol(3.0)[1]), 1.0, 1e-12);
}

TEST(DormandPrince, StepBudgetExhausted) {
  ode::Options opt;
  opt.max_steps = 3;
  try {
    ode::DormandPrince(opt).solve(kOscillator, 0.0, {0.0, 1.0}, 100.0);
    FAIL() << "expected IntegratorFailure";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::IntegratorFailure);
  }
}
