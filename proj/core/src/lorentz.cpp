#include "nullsim/lorentz.hpp"

#include <algorithm>
#include <cmath>

#include "nullsim/errors.hpp"

namespace nullsim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NotNull: return "NotNull";
    case ErrorCode::GeodesicDegeneracy: return "GeodesicDegeneracy";
    case ErrorCode::BadInitialFrame: return "BadInitialFrame";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
    case ErrorCode::KappaVanishes: return "KappaVanishes";
    case ErrorCode::TauVanishes: return "TauVanishes";
    case ErrorCode::SignChange: return "SignChange";
    case ErrorCode::DomainOverflow: return "DomainOverflow";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::AnchorRequired: return "AnchorRequired";
    case ErrorCode::NotNullDirection: return "NotNullDirection";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

GeometryError::GeometryError(ErrorCode code, const std::string& message, std::optional<double> where)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), where_(where) {}

std::string_view to_string(CausalCharacter c) noexcept {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
  }
  return "unknown";
}

double norm_inf(const Vec3& v) {
  return std::max({std::abs(v.c1), std::abs(v.c2), std::abs(v.c3)});
}

double norm_euclid(const Vec3& v) { return std::sqrt(v.c1 * v.c1 + v.c2 * v.c2 + v.c3 * v.c3); }

bool is_zero(const Vec3& v, double eps) { return norm_inf(v) <= eps; }

bool is_finite(const Vec3& v) {
  return std::isfinite(v.c1) && std::isfinite(v.c2) && std::isfinite(v.c3);
}

CausalCharacter causal_character(const Vec3& v, double eps_null) {
  const double q = lorentz_dot(v, v);
  if (q < -eps_null) return CausalCharacter::Timelike;
  if (std::abs(q) <= eps_null && norm_inf(v) > eps_null) return CausalCharacter::Null;
  return CausalCharacter::Spacelike;
}

CausalCharacter causal_character_relative(const Vec3& v, double eps_null) {
  const double scale = norm_inf(v);
  if (scale == 0.0) return CausalCharacter::Spacelike;
  return causal_character(v / scale, eps_null);
}

Vec3 null_partner(const Vec3& u, const Vec3& v) {
  // w0 = e − ⟨e,v⟩v is Lorentz-orthogonal to v; pick the basis vector giving
  // the best-conditioned ⟨u, w0⟩.
  Vec3 best{};
  double best_dot = 0.0;
  for (const Vec3& e : {kE1, kE2, kE3}) {
    const Vec3 w0 = e - lorentz_dot(e, v) * v;
    const double d = lorentz_dot(u, w0);
    if (std::abs(d) > std::abs(best_dot)) {
      best_dot = d;
      best = w0;
    }
  }
  const Vec3 w = best / best_dot;
  return w - 0.5 * lorentz_dot(w, w) * u;
}

LinearMap3 LinearMap3::compose(const LinearMap3& inner) const {
  std::array<std::array<double, 3>, 3> r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += m_[i][k] * inner.m_[k][j];
  return LinearMap3(r);
}

double LinearMap3::determinant() const {
  return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
         m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
         m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

LinearMap3 LinearMap3::boost_x2(double eta) {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  return LinearMap3({{{ch, sh, 0}, {sh, ch, 0}, {0, 0, 1}}});
}

LinearMap3 LinearMap3::boost_x3(double eta) {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  return LinearMap3({{{ch, 0, sh}, {0, 1, 0}, {sh, 0, ch}}});
}

LinearMap3 LinearMap3::rotation_x1(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return LinearMap3({{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

LinearMap3 LinearMap3::reflection_x3() { return LinearMap3({{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}}); }

double lorentz_isometry_defect(const LinearMap3& map) {
  const std::array<Vec3, 3> basis{kE1, kE2, kE3};
  double defect = 0.0;
  for (const auto& x : basis)
    for (const auto& y : basis)
      defect = std::max(defect, std::abs(lorentz_dot(map(x), map(y)) - lorentz_dot(x, y)));
  return defect;
}

}  // namespace nullsim
