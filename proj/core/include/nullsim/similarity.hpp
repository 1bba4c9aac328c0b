#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullsim/frame.hpp"
#include "nullsim/numerics.hpp"
#include "nullsim/phi.hpp"

namespace nullsim {

/// Corresponding start points (s_a0, s_b0) of two curves.
struct Anchor {
  double s_a = 0.0;
  double s_b = 0.0;
};

/// Arc-parameter map s_a(s_b) = s_a0 + ∫λ ds_b sampled on b's grid, λ > 0.
class VariableTransformation {
 public:
  VariableTransformation() = default;
  /// Validates λ > 0 and strictly increasing s_a.
  VariableTransformation(ParameterGrid grid_b, std::vector<double> lambda, std::vector<double> s_a);

  /// Exact quadrature of λ; throws NonPositiveLambda.
  static VariableTransformation from_lambda(const ScalarFunction& lambda, const ParameterGrid& grid_b,
                                            Anchor anchor);
  static VariableTransformation identity(const ParameterGrid& grid);

  const ParameterGrid& grid_b() const { return grid_b_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<double>& s_a() const { return s_a_; }
  std::size_t size() const { return s_a_.size(); }
  Interval image() const { return {s_a_.front(), s_a_.back()}; }

 private:
  ParameterGrid grid_b_;
  std::vector<double> lambda_;
  std::vector<double> s_a_;
};

enum class Criterion { Tangent, Normal, Binormal, Ratio };

std::string_view to_string(Criterion c) noexcept;

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct DiagnosticSample {
  double s_b = 0.0;
  double s_a = 0.0;
  double deviation = 0.0;
};

struct LambdaStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Verdict is pass iff every residual is ≤ tol.
struct SimilarityReport {
  Criterion criterion = Criterion::Tangent;
  double tol = 0.0;
  double max_vector_deviation = 0.0;
  double max_scalar_deviation = 0.0;
  std::vector<NamedResidual> residuals;
  LambdaStats lambda;
  std::vector<DiagnosticSample> diagnostics;
  std::size_t matched_points = 0;
  /// Ratio criterion only: f_a = f_b on the matched points.
  std::optional<bool> ratio_equal;
  /// Ratio criterion only: frames coincide at the anchor.
  std::optional<bool> frames_agree;
  bool passed = false;
};

struct SimilarityOptions {
  double tol = 1e-6;
  double eps_kappa = kDefaultEpsKappa;
  ode::Options ode{};
};

/// Length L such that ∫_{s_b0}^{s_b0+L} λ = image_length, i.e. the s_b span
/// whose image under the transformation has the given length.
double span_for_image(const ScalarFunction& lambda, double s_b0, double image_length);

/// b(s_b) = anchor_point + ∫_{s_b0}^{s_b} α_a(s_a(u)) du with s_a(s_b0) = s_a0.
/// Throws NonPositiveLambda or DomainOverflow.
NullCurve synthesize_similar(const NullCurve& a, const ScalarFunction& lambda, Interval s_b_domain,
                             const Vec3& anchor_point, std::optional<Anchor> anchor = std::nullopt);
NullCurve synthesize_similar(const FramedCurve& fa, const ScalarFunction& lambda, Interval s_b_domain,
                             const Vec3& anchor_point, std::optional<Anchor> anchor = std::nullopt);

/// max ‖α_a(s_a(s_b)) − α_b(s_b)‖ over T's grid.
SimilarityReport check_tangent_similarity(const FramedCurve& fa, const FramedCurve& fb,
                                          const VariableTransformation& t, double tol);

struct CriterionResult {
  SimilarityReport report;
  VariableTransformation transformation;
};

/// Infers ds_a/ds_b = κ_b/κ_a from the anchor and compares β fields.
CriterionResult normal_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                 const SimilarityOptions& opt = {});

/// Infers ds_a/ds_b = τ_b/τ_a from the anchor and compares γ fields.
CriterionResult binormal_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                   const SimilarityOptions& opt = {});

/// Matches points by equal total curvature from the anchor and compares
/// f = τ/κ. Similarity is only asserted when the anchor frames agree and the
/// tangent ODE solved from that shared data reproduces both tangent fields.
SimilarityReport ratio_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                 const SimilarityOptions& opt = {});

struct ScalingReport {
  double kappa_residual = 0.0;  ///< max |κ_b − λκ_a|
  double tau_residual = 0.0;    ///< max |τ_b − λτ_a|
  double tol = 0.0;
  bool passed = false;
};

ScalingReport curvature_scaling_check(const FramedCurve& fa, const FramedCurve& fb,
                                      const VariableTransformation& t, double tol);

struct BertrandResult {
  bool dependent = false;           ///< β_a ∧ β_b = 0 at every matched point
  bool unit_factor = false;         ///< dependent with factor ≡ +1
  double max_wedge = 0.0;
  std::vector<double> factor;       ///< ⟨β_a, β_b⟩ per point
};

BertrandResult is_bertrand_pair(const FramedCurve& fa, const FramedCurve& fb, const VariableTransformation& t,
                                double tol);

/// Heuristic: coarse scan of s_a over a's grid minimising the tangent gap to
/// α_b(s_b0). Not used by the criteria.
Anchor search_anchor(const FramedCurve& fa, const FramedCurve& fb, double s_b0);

}  // namespace nullsim
