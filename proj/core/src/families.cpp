#include "nullsim/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullsim/errors.hpp"

namespace nullsim {

std::string_view to_string(FamilyKind k) noexcept {
  switch (k) {
    case FamilyKind::Geodesic: return "geodesic";
    case FamilyKind::TorsionFree: return "torsion_free";
    case FamilyKind::Helix: return "helix";
  }
  return "unknown";
}

NullCurve make_null_geodesic(const Vec3& p0, const Vec3& d, Interval domain) {
  if (!is_finite(d) || !is_finite(p0)) throw GeometryError(ErrorCode::NotNullDirection, "non-finite input");
  if (causal_character_relative(d, 1e-12) != CausalCharacter::Null)
    throw GeometryError(ErrorCode::NotNullDirection, "geodesic direction must be null and nonzero");
  return builtin_line(domain, p0, d);
}

FramedCurve make_null_helix(double kappa0, double tau0, const FrameSample& initial, Interval domain,
                            std::size_t samples) {
  if (kappa0 == 0.0 || !std::isfinite(kappa0))
    throw GeometryError(ErrorCode::BadInput, "helix curvature must be nonzero");
  return integrate_frenet(ScalarFunction::constant(kappa0), ScalarFunction::constant(tau0), initial,
                          ParameterGrid::uniform(domain, samples));
}

FramedCurve make_torsion_free(const ScalarFunction& kappa, const FrameSample& initial, Interval domain,
                              std::size_t samples) {
  return integrate_frenet(kappa, ScalarFunction::constant(0.0), initial, ParameterGrid::uniform(domain, samples));
}

FamilyMember make_family_member(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::Geodesic:
      return {make_null_geodesic(spec.point, spec.direction, spec.domain), std::nullopt};
    case FamilyKind::Helix: {
      auto fc = make_null_helix(spec.kappa0, spec.tau0, spec.initial, spec.domain, spec.samples);
      return {fc.source(), fc};
    }
    case FamilyKind::TorsionFree: {
      auto fc = make_torsion_free(spec.kappa, spec.initial, spec.domain, spec.samples);
      return {fc.source(), fc};
    }
  }
  throw GeometryError(ErrorCode::BadInput, "unknown family kind");
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ClosureVerdict closure_check(const FamilySpec& spec, const ScalarFunction& lambda, double tol) {
  ClosureVerdict v;
  v.kind = spec.kind;
  v.tol = tol;
  const FamilyMember a = make_family_member(spec);
  const Interval da = a.curve.domain();
  const double s_b_end = da.lo + span_for_image(lambda, da.lo, da.length());
  const Interval db{da.lo, s_b_end};
  const Anchor anchor{da.lo, da.lo};
  const NullCurve b = synthesize_similar(a.curve, lambda, db, a.curve.position(da.lo), anchor);
  const ParameterGrid grid = ParameterGrid::uniform(db, spec.samples);

  switch (spec.kind) {
    case FamilyKind::Geodesic: {
      double second = 0.0, nullity = 0.0, straight = 0.0;
      const Vec3 b0 = b.position(db.lo);
      const Vec3 dir = spec.direction / norm_euclid(spec.direction);
      for (double s : grid.values()) {
        second = std::max(second, norm_inf(b.evaluate(s, 2)));
        const Vec3 t = b.evaluate(s, 1);
        nullity = std::max(nullity, std::abs(lorentz_dot(t, t)));
        const Vec3 d = b.position(s) - b0;
        // Euclidean cross with the direction measures departure from the line.
        const Vec3 c{d.c2 * dir.c3 - d.c3 * dir.c2, d.c3 * dir.c1 - d.c1 * dir.c3, d.c1 * dir.c2 - d.c2 * dir.c1};
        straight = std::max(straight, norm_euclid(c));
      }
      v.measurements = {{"second_derivative", second}, {"nullity", nullity}, {"straightness", straight}};
      v.note = "fixed-direction geodesic; closure holds for every positive lambda";
      break;
    }
    case FamilyKind::TorsionFree: {
      const FramedCurve fb = frame_curve(b, grid);
      const auto t = VariableTransformation::from_lambda(lambda, grid, anchor);
      const auto scaling = curvature_scaling_check(*a.framed, fb, t, tol);
      v.measurements = {{"max_abs_tau_b", max_abs(fb.tau())}, {"kappa_scaling", scaling.kappa_residual}};
      break;
    }
    case FamilyKind::Helix: {
      const FramedCurve fb = frame_curve(b, grid);
      const double f_a = spec.tau0 / spec.kappa0;
      double f_dev = 0.0;
      for (const auto& f : fb.samples()) f_dev = std::max(f_dev, std::abs(f.tau / f.kappa - f_a));
      const auto k = fb.kappa(), t = fb.tau();
      const double sk = numerics::stdev(k), st = numerics::stdev(t);
      if (lambda.is_constant()) {
        v.measurements = {{"stdev_kappa_b", sk}, {"stdev_tau_b", st}, {"ratio_deviation", f_dev}};
        v.note = "constant lambda: b is a helix";
      } else {
        v.measurements = {{"ratio_deviation", f_dev}};
        std::ostringstream note;
        note.precision(6);
        note << "variable lambda: only the curvature ratio is preserved (stdev kappa_b = " << sk << ")";
        v.note = note.str();
      }
      break;
    }
  }
  v.passed = std::all_of(v.measurements.begin(), v.measurements.end(),
                         [tol](const NamedResidual& r) { return std::isfinite(r.value) && r.value <= tol; });
  return v;
}

}  // namespace nullsim
