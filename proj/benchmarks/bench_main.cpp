#include <benchmark/benchmark.h>

#include <numbers>

#include "nullsim/curve.hpp"
#include "nullsim/frame.hpp"
#include "nullsim/phi.hpp"
#include "nullsim/similarity.hpp"

namespace {

using namespace nullsim;

constexpr Interval kDomain{0.0, 2.0 * std::numbers::pi};

void BM_FrameHelix1(benchmark::State& state) {
  const NullCurve h = builtin_helix1(kDomain);
  const auto grid = ParameterGrid::uniform(kDomain, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(frame_curve(h, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FrameHelix1)->Arg(101)->Arg(1001)->Arg(10001);

void BM_FrameSampled(benchmark::State& state) {
  const NullCurve h = builtin_helix1(kDomain);
  const auto grid = ParameterGrid::uniform(kDomain, static_cast<std::size_t>(state.range(0)));
  std::vector<Vec3> pts;
  for (double s : grid.values()) pts.push_back(h.position(s));
  const NullCurve sampled = NullCurve::sampled("bench", grid, pts);
  for (auto _ : state) benchmark::DoNotOptimize(frame_curve(sampled, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FrameSampled)->Arg(101)->Arg(1001)->Arg(10001);

void BM_IntegrateFrenet(benchmark::State& state) {
  const auto grid = ParameterGrid::uniform(kDomain, static_cast<std::size_t>(state.range(0)));
  const auto kappa = ScalarFunction::sine(-1.5, -0.5);
  const auto tau = ScalarFunction::affine(-0.5, -0.05);
  const FrameSample init = helix1_initial_frame();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_frenet(kappa, tau, init, grid));
}
BENCHMARK(BM_IntegrateFrenet)->Arg(101)->Arg(1001);

void BM_TotalCurvature(benchmark::State& state) {
  const auto grid = ParameterGrid::uniform(kDomain, static_cast<std::size_t>(state.range(0)));
  const FramedCurve fc = frame_curve(builtin_helix1(kDomain), grid);
  for (auto _ : state) benchmark::DoNotOptimize(total_curvature(fc));
}
BENCHMARK(BM_TotalCurvature)->Arg(1001);

struct Pair {
  FramedCurve a;
  FramedCurve b;
};

Pair similar_pair(std::size_t n) {
  const auto lambda = ScalarFunction::sine(2.0, 0.5);
  FramedCurve a = frame_curve(builtin_helix1(kDomain), ParameterGrid::uniform(kDomain, n));
  const Interval db{0.0, 0.95 * span_for_image(lambda, 0.0, kDomain.length())};
  const NullCurve b = synthesize_similar(a, lambda, db, Vec3{1.0, -2.0, 0.5}, Anchor{0.0, 0.0});
  return {std::move(a), frame_curve(b, ParameterGrid::uniform(db, n))};
}

void BM_NormalCriterion(benchmark::State& state) {
  const Pair p = similar_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normal_criterion(p.a, p.b, Anchor{0.0, 0.0}));
}
BENCHMARK(BM_NormalCriterion)->Arg(201)->Arg(1001);

void BM_RatioCriterion(benchmark::State& state) {
  const Pair p = similar_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ratio_criterion(p.a, p.b, Anchor{0.0, 0.0}));
}
BENCHMARK(BM_RatioCriterion)->Arg(201)->Arg(1001);

}  // namespace

BENCHMARK_MAIN();
