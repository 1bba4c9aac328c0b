#pragma once

// Truncated Taylor series arithmetic, used as an independent differentiation
// oracle in tests. Jet<N> holds f(t0 + h) = sum c[k] h^k for k < N.

#include <array>
#include <cmath>
#include <cstddef>

namespace nullsim::testing {

template <std::size_t N>
struct Jet {
  std::array<double, N> c{};

  static Jet variable(double t0) {
    Jet j;
    j.c[0] = t0;
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }
  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  // k-th derivative at t0.
  double derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c[k] * fact;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < N; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < N; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& x : a.c) x *= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

// sin and cos of a jet via the coupled recurrences s' = c u', c' = -s u'.
template <std::size_t N>
void sincos(const Jet<N>& u, Jet<N>& s, Jet<N>& c) {
  s = Jet<N>{};
  c = Jet<N>{};
  s.c[0] = std::sin(u.c[0]);
  c.c[0] = std::cos(u.c[0]);
  for (std::size_t k = 1; k < N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * u.c[j] * c.c[k - j];
      cc -= static_cast<double>(j) * u.c[j] * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    c.c[k] = cc / static_cast<double>(k);
  }
}

}  // namespace nullsim::testing
