#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nullsim/lorentz.hpp"

namespace nullsim {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  constexpr double length() const { return hi - lo; }
  constexpr bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
};

/// Real function of one variable with an optional analytic derivative.
/// Without one, `derivative` falls back to a five-point central difference.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction() : ScalarFunction(constant(0.0)) {}
  explicit ScalarFunction(Fn value, Fn derivative = {}, bool constant_valued = false);

  static ScalarFunction constant(double c);
  /// a + b·s
  static ScalarFunction affine(double a, double b);
  /// a + b·sin(s)
  static ScalarFunction sine(double a, double b);

  double operator()(double s) const { return value_(s); }
  double derivative(double s) const;
  bool is_constant() const { return constant_; }

 private:
  Fn value_;
  Fn derivative_;
  bool constant_ = false;
};

namespace numerics {

/// Fornberg's finite-difference weights. Returns w[k][j], the weight of
/// node j for the k-th derivative at x0, for k = 0..max_order. Order 0 gives
/// Lagrange interpolation weights.
std::vector<std::vector<double>> fd_weights(std::span<const double> nodes, double x0, int max_order);

/// First index of a window of `width` consecutive nodes centred on x as far as
/// the array bounds allow. Requires nodes sorted (either direction).
std::size_t window_start(std::span<const double> nodes, double x, std::size_t width);

/// Index i with nodes[i] <= x <= nodes[i+1] (clamped) for increasing nodes.
std::size_t locate_cell(std::span<const double> nodes, double x);

/// k-th derivative at x of the local interpolating polynomial through the
/// `width` nodes nearest x.
template <typename T>
T local_derivative(std::span<const double> nodes, std::span<const T> values, double x, int order,
                   std::size_t width) {
  width = std::min(width, nodes.size());
  const std::size_t start = window_start(nodes, x, width);
  auto w = fd_weights(nodes.subspan(start, width), x, order);
  T acc{};
  for (std::size_t j = 0; j < width; ++j) acc += w[order][j] * values[start + j];
  return acc;
}

/// Differentiate a sampled array node by node with a `width`-point local
/// stencil (centred in the interior, one-sided at the ends).
template <typename T>
std::vector<T> differentiate_samples(std::span<const double> nodes, std::span<const T> values,
                                     int order, std::size_t width) {
  std::vector<T> out(nodes.size());
  width = std::min(width, nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t start = window_start(nodes, nodes[i], width);
    auto w = fd_weights(nodes.subspan(start, width), nodes[i], order);
    T acc{};
    for (std::size_t j = 0; j < width; ++j) acc += w[order][j] * values[start + j];
    out[i] = acc;
  }
  return out;
}

/// Cumulative integral of sampled values: out[i] = ∫_{nodes[0]}^{nodes[i]}.
/// Each cell integrates the local `width`-point interpolant exactly.
std::vector<double> cumulative_integral(std::span<const double> nodes, std::span<const double> values,
                                        std::size_t width = 6);

/// Eight-point Gauss–Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes{
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights{
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename T, typename F>
T gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T acc{};
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) acc += kGaussWeights[k] * f(mid + half * kGaussNodes[k]);
  return half * acc;
}

/// x ↦ ∫_{lo}^{x} g(u) du for a smooth g on an interval, tabulated per cell
/// with Gauss–Legendre and completed on the partial cell at query time.
template <typename T>
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<T(double)> g, Interval domain, std::size_t cells = 256)
      : g_(std::move(g)), domain_(domain) {
    cells = std::max<std::size_t>(cells, 1);
    edges_.resize(cells + 1);
    sums_.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
      edges_[i] = domain.lo + domain.length() * static_cast<double>(i) / static_cast<double>(cells);
    edges_.back() = domain.hi;
    sums_[0] = T{};
    for (std::size_t i = 0; i < cells; ++i)
      sums_[i + 1] = sums_[i] + gauss_legendre<T>(g_, edges_[i], edges_[i + 1]);
  }

  T operator()(double x) const {
    const std::size_t i = locate_cell(edges_, x);
    if (x == edges_[i]) return sums_[i];
    return sums_[i] + gauss_legendre<T>(g_, edges_[i], x);
  }

  const Interval& domain() const { return domain_; }

 private:
  std::function<T(double)> g_;
  Interval domain_;
  std::vector<double> edges_;
  std::vector<T> sums_;
};

double mean(std::span<const double> v);
double stdev(std::span<const double> v);

}  // namespace numerics
}  // namespace nullsim
