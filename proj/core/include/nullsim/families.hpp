#pragma once

#include <string>
#include <vector>

#include "nullsim/frame.hpp"
#include "nullsim/similarity.hpp"

namespace nullsim {

enum class FamilyKind { Geodesic, TorsionFree, Helix };

std::string_view to_string(FamilyKind k) noexcept;

struct FamilySpec {
  FamilyKind kind = FamilyKind::Helix;
  Interval domain{0.0, 6.283185307179586};
  std::size_t samples = 801;
  // Geodesic
  Vec3 point{};
  Vec3 direction{1.0, 1.0, 0.0};
  // Helix
  double kappa0 = -1.0;
  double tau0 = -0.5;
  // TorsionFree
  ScalarFunction kappa = ScalarFunction::constant(1.0);
  // Helix and TorsionFree
  FrameSample initial = helix1_initial_frame();
};

/// a(s) = p0 + s·d; throws NotNullDirection unless d is null and nonzero.
NullCurve make_null_geodesic(const Vec3& p0, const Vec3& d, Interval domain);

FramedCurve make_null_helix(double kappa0, double tau0, const FrameSample& initial, Interval domain,
                            std::size_t samples = 801);

FramedCurve make_torsion_free(const ScalarFunction& kappa, const FrameSample& initial, Interval domain,
                              std::size_t samples = 801);

/// Geodesic: a bare curve (no frame exists). Others: the framed member.
struct FamilyMember {
  NullCurve curve;
  std::optional<FramedCurve> framed;
};

FamilyMember make_family_member(const FamilySpec& spec);

struct ClosureVerdict {
  FamilyKind kind = FamilyKind::Helix;
  bool passed = false;
  double tol = 0.0;
  std::vector<NamedResidual> measurements;
  std::string note;
};

/// Synthesises b from the family member with density λ (s_b starting at the
/// member's domain start) and checks that b stays in the family.
/// Helix with constant λ: κ_b, τ_b constant. Helix with variable λ: only
/// f_b = f_a is asserted.
ClosureVerdict closure_check(const FamilySpec& spec, const ScalarFunction& lambda, double tol);

}  // namespace nullsim
