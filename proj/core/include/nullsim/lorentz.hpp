#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace nullsim {

/// Coordinates (x1, x2, x3) of E³₁; x1 is the timelike axis.
struct Vec3 {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? c1 : (i == 1 ? c2 : c3); }

  constexpr Vec3& operator+=(const Vec3& o) {
    c1 += o.c1; c2 += o.c2; c3 += o.c3;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    c1 -= o.c1; c2 -= o.c2; c3 -= o.c3;
    return *this;
  }
  constexpr Vec3& operator*=(double k) {
    c1 *= k; c2 *= k; c3 *= k;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.c1, -a.c2, -a.c3}; }
  friend constexpr Vec3 operator*(double k, Vec3 a) { return a *= k; }
  friend constexpr Vec3 operator*(Vec3 a, double k) { return a *= k; }
  friend constexpr Vec3 operator/(Vec3 a, double k) { return a *= (1.0 / k); }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr Vec3 kE1{1.0, 0.0, 0.0};
inline constexpr Vec3 kE2{0.0, 1.0, 0.0};
inline constexpr Vec3 kE3{0.0, 0.0, 1.0};

enum class CausalCharacter { Spacelike, Timelike, Null };

std::string_view to_string(CausalCharacter c) noexcept;

inline constexpr double kDefaultNullEpsilon = 1e-9;

/// ⟨x, y⟩ = −x1·y1 + x2·y2 + x3·y3
constexpr double lorentz_dot(const Vec3& x, const Vec3& y) {
  return -x.c1 * y.c1 + x.c2 * y.c2 + x.c3 * y.c3;
}

/// Vector product of E³₁ with the sign pattern
/// (x2y3 − x3y2, x1y3 − x3y1, x2y1 − x1y2), so that e1∧e2 = −e3,
/// e2∧e3 = e1, e3∧e1 = −e2. The result is Lorentz-orthogonal to both factors.
constexpr Vec3 lorentz_cross(const Vec3& x, const Vec3& y) {
  return {x.c2 * y.c3 - x.c3 * y.c2,
          x.c1 * y.c3 - x.c3 * y.c1,
          x.c2 * y.c1 - x.c1 * y.c2};
}

/// Zero counts as Spacelike, matching the classical convention.
CausalCharacter causal_character(const Vec3& v, double eps_null = kDefaultNullEpsilon);

/// Same classification with ε scaled by ‖v‖∞², for vectors far from unit size.
CausalCharacter causal_character_relative(const Vec3& v, double eps_null = kDefaultNullEpsilon);

bool is_zero(const Vec3& v, double eps = 0.0);
bool is_finite(const Vec3& v);

double norm_inf(const Vec3& v);
/// Coordinate (Euclidean) norm; used for deviation reporting only.
double norm_euclid(const Vec3& v);

/// Given a null vector `u` and a unit spacelike `v` with ⟨u, v⟩ = 0, returns the
/// unique null w with ⟨u, w⟩ = 1 and ⟨w, v⟩ = 0. Insensitive to the sign of v.
Vec3 null_partner(const Vec3& u, const Vec3& v);

/// 3×3 linear map acting on coordinates; Lorentz isometries are built by the
/// factory functions below.
class LinearMap3 {
 public:
  constexpr LinearMap3() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}
  constexpr explicit LinearMap3(const std::array<std::array<double, 3>, 3>& rows) : m_(rows) {}

  constexpr Vec3 operator()(const Vec3& v) const {
    return {m_[0][0] * v.c1 + m_[0][1] * v.c2 + m_[0][2] * v.c3,
            m_[1][0] * v.c1 + m_[1][1] * v.c2 + m_[1][2] * v.c3,
            m_[2][0] * v.c1 + m_[2][1] * v.c2 + m_[2][2] * v.c3};
  }

  LinearMap3 compose(const LinearMap3& inner) const;
  double determinant() const;
  constexpr double at(int r, int c) const { return m_[r][c]; }

  /// Boost mixing x1 with x2 by rapidity `eta`.
  static LinearMap3 boost_x2(double eta);
  /// Boost mixing x1 with x3 by rapidity `eta`.
  static LinearMap3 boost_x3(double eta);
  /// Spatial rotation in the (x2, x3) plane.
  static LinearMap3 rotation_x1(double angle);
  /// x3 ↦ −x3. Orientation-reversing: flips the sign of the vector product.
  static LinearMap3 reflection_x3();

 private:
  std::array<std::array<double, 3>, 3> m_;
};

/// max over pairs of |⟨Lx, Ly⟩ − ⟨x, y⟩| on the standard basis.
double lorentz_isometry_defect(const LinearMap3& map);

}  // namespace nullsim
