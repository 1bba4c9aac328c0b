#include "nullsim/numerics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nullsim {

ScalarFunction::ScalarFunction(Fn value, Fn derivative, bool constant_valued)
    : value_(std::move(value)), derivative_(std::move(derivative)), constant_(constant_valued) {}

ScalarFunction ScalarFunction::constant(double c) {
  return ScalarFunction([c](double) { return c; }, [](double) { return 0.0; }, true);
}

ScalarFunction ScalarFunction::affine(double a, double b) {
  if (b == 0.0) return constant(a);
  return ScalarFunction([a, b](double s) { return a + b * s; }, [b](double) { return b; });
}

ScalarFunction ScalarFunction::sine(double a, double b) {
  if (b == 0.0) return constant(a);
  return ScalarFunction([a, b](double s) { return a + b * std::sin(s); },
                        [b](double s) { return b * std::cos(s); });
}

double ScalarFunction::derivative(double s) const {
  if (derivative_) return derivative_(s);
  const double h = 1e-3 * std::max(1.0, std::abs(s));
  return (value_(s - 2 * h) - 8 * value_(s - h) + 8 * value_(s + h) - value_(s + 2 * h)) / (12 * h);
}

namespace numerics {

std::vector<std::vector<double>> fd_weights(std::span<const double> x, double x0, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(static_cast<std::size_t>(m) + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::size_t window_start(std::span<const double> nodes, double x, std::size_t width) {
  const std::size_t n = nodes.size();
  if (width >= n) return 0;
  const bool increasing = nodes.back() >= nodes.front();
  // First node not "before" x in the sweep direction.
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const bool before = increasing ? nodes[mid] < x : nodes[mid] > x;
    if (before) lo = mid + 1;
    else hi = mid;
  }
  // Centre the window between nodes[lo-1] and nodes[lo].
  const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(lo) - static_cast<std::ptrdiff_t>(width / 2);
  const std::ptrdiff_t max_start = static_cast<std::ptrdiff_t>(n - width);
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(start, 0, max_start));
}

std::size_t locate_cell(std::span<const double> nodes, double x) {
  if (nodes.size() < 2) return 0;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::ptrdiff_t i = std::distance(nodes.begin(), it) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(nodes.size()) - 2));
}

std::vector<double> cumulative_integral(std::span<const double> nodes, std::span<const double> values,
                                        std::size_t width) {
  const std::size_t n = nodes.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  width = std::min(width, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    const std::size_t start = window_start(nodes, 0.5 * (a + b), width);
    const auto sub = nodes.subspan(start, width);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double cell = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      const auto w = fd_weights(sub, mid + half * kGaussNodes[k], 0);
      double v = 0.0;
      for (std::size_t j = 0; j < width; ++j) v += w[0][j] * values[start + j];
      cell += kGaussWeights[k] * v;
    }
    out[i + 1] = out[i] + half * cell;
  }
  return out;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace numerics
}  // namespace nullsim
