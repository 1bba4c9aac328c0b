#pragma once

// Reference Cartan data computed from Taylor jets of a curve given in closed
// form. Independent of the library's frame construction: it uses the
// pseudo-arc formulas gamma = -a''' - <a''',a'''>/2 alpha, beta = alpha ^ gamma,
// kappa = <alpha', beta>, tau = -<beta', gamma>. Valid when <a'',a''> = 1.

#include <array>
#include <functional>

#include "jet.hpp"
#include "nullsim/lorentz.hpp"

namespace nullsim::testing {

inline constexpr std::size_t kOrder = 6;
using J = Jet<kOrder>;
using JetCurve = std::function<std::array<J, 3>(const J&)>;

struct OracleFrame {
  Vec3 alpha, beta, gamma;
  double kappa = 0.0;
  double tau = 0.0;
  double pseudo_arc = 0.0;  // <a'',a''>
};

inline Vec3 deriv(const std::array<J, 3>& x, std::size_t k) {
  return {x[0].derivative(k), x[1].derivative(k), x[2].derivative(k)};
}

inline OracleFrame oracle_frame(const JetCurve& curve, double t) {
  const auto x = curve(J::variable(t));
  const Vec3 a1 = deriv(x, 1), a2 = deriv(x, 2), a3 = deriv(x, 3), a4 = deriv(x, 4);
  OracleFrame o;
  o.pseudo_arc = lorentz_dot(a2, a2);
  const double q = lorentz_dot(a3, a3);
  o.alpha = a1;
  o.gamma = -1.0 * a3 - 0.5 * q * a1;
  o.beta = lorentz_cross(o.alpha, o.gamma);
  o.kappa = lorentz_dot(a2, o.beta);
  // beta' = a'' ^ gamma + alpha ^ gamma', gamma' = -a'''' - q'/2 alpha - q/2 a''
  const double dq = 2.0 * lorentz_dot(a3, a4);
  const Vec3 dgamma = -1.0 * a4 - 0.5 * dq * a1 - 0.5 * q * a2;
  const Vec3 dbeta = lorentz_cross(a2, o.gamma) + lorentz_cross(o.alpha, dgamma);
  o.tau = -lorentz_dot(dbeta, o.gamma);
  return o;
}

inline std::array<J, 3> helix1_jet(const J& t) {
  J s, c;
  sincos(t, s, c);
  return {t, c, s};
}

}  // namespace nullsim::testing
