#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nullsim/frame.hpp"
#include "nullsim/numerics.hpp"
#include "nullsim/ode.hpp"

namespace nullsim {

/// Total-curvature chart φ(s) = ∫κ ds of a framed curve, with the curvature
/// ratio f = τ/κ sampled on the same nodes.
class PhiChart {
 public:
  PhiChart() = default;

  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& f() const { return f_; }
  /// +1 when φ increases with s, −1 otherwise.
  int direction() const { return direction_; }
  double s_anchor() const { return s_anchor_; }
  Interval phi_range() const;
  std::size_t size() const { return s_.size(); }

  double phi_of_s(double s) const;
  double s_of_phi(double phi) const;
  double f_of_phi(double phi) const;
  bool contains_phi(double phi, double slack = 0.0) const;

 private:
  friend PhiChart total_curvature(const FramedCurve&, std::optional<double>, double);

  std::vector<double> s_;
  std::vector<double> phi_;
  std::vector<double> f_;
  int direction_ = 1;
  double s_anchor_ = 0.0;
};

inline constexpr double kDefaultEpsKappa = 1e-8;

/// φ is zero at `s_anchor` (default: first grid node). Throws KappaVanishes
/// if |κ| < eps_kappa anywhere, SignChange if κ changes sign.
PhiChart total_curvature(const FramedCurve& fc, std::optional<double> s_anchor = std::nullopt,
                         double eps_kappa = kDefaultEpsKappa);

/// max over interior chart nodes of ‖α‴ + 2f·α′ + f′·α‖ (φ-derivatives by
/// differencing α(φ) and f(φ) on the chart nodes).
double tangent_ode_residual(const FramedCurve& fc, const PhiChart& chart);

/// Same residual for an explicit tangent field sampled on φ nodes.
double tangent_ode_residual(std::span<const double> phi, std::span<const Vec3> alpha, std::span<const double> f);

/// Tangent α(φ) with its first two φ-derivatives.
class TangentField {
 public:
  using Jet = std::array<Vec3, 3>;
  using JetFn = std::function<Jet(double)>;

  TangentField() = default;
  TangentField(JetFn jet, Interval phi_domain, double phi_anchor);

  Jet jet(double phi) const;
  Vec3 alpha(double phi) const { return jet(phi)[0]; }
  const Interval& domain() const { return domain_; }
  double anchor() const { return anchor_; }

 private:
  JetFn jet_;
  Interval domain_;
  double anchor_ = 0.0;
};

/// (α, dα/dφ, d²α/dφ²) at the start point.
struct TangentInit {
  Vec3 alpha;
  Vec3 dalpha;
  Vec3 d2alpha;
};

/// dα/dφ = β and d²α/dφ² = −γ − f·α.
TangentInit tangent_init_from_frame(const FrameSample& frame, double f);

struct TangentOdeOptions {
  ode::Options ode{};
  /// Rescale the timelike component of returned samples back onto the null cone.
  bool project_null = false;
};

struct TangentSolution {
  TangentField field;
  std::vector<double> phi;
  std::vector<Vec3> alpha;
  double max_null_drift = 0.0;  ///< max |⟨α,α⟩| over the samples before projection
};

/// Solves α‴ + 2f α′ + f′ α = 0 from `init` at phi0 and samples it on
/// `phi_nodes` (which may lie on both sides of phi0).
TangentSolution solve_tangent_ode(const ScalarFunction& f, const TangentInit& init, double phi0,
                                  std::span<const double> phi_nodes, const TangentOdeOptions& opt = {});

/// Integrates ds = dφ/κ and a = anchor + ∫α ds; s = 0 at the field's anchor φ.
/// With κ < 0 the parameter runs opposite to φ.
NullCurve reconstruct_curve(const TangentField& alpha, const ScalarFunction& kappa_of_phi, const Vec3& anchor,
                            double eps_kappa = kDefaultEpsKappa);

}  // namespace nullsim
