#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nullsim/curve.hpp"
#include "nullsim/numerics.hpp"
#include "nullsim/ode.hpp"

namespace nullsim {

/// Cartan frame {α, γ, β} with curvature κ and torsion τ at parameter s:
/// α′ = κβ, γ′ = τβ, β′ = −τα − κγ, β = α∧γ.
struct FrameSample {
  double s = 0.0;
  Vec3 alpha;
  Vec3 beta;
  Vec3 gamma;
  double kappa = 0.0;
  double tau = 0.0;
};

/// A frame together with its derivatives along the curve.
struct FrameJet {
  FrameSample frame;
  Vec3 dalpha;
  Vec3 dbeta;
  Vec3 dgamma;
  double tau_from_gamma = 0.0;  ///< ⟨γ′, β⟩
  double tau_from_beta = 0.0;   ///< −⟨β′, γ⟩
};

struct FrameOptions {
  double eps_null = 1e-6;  ///< relative to ‖a′‖∞²
  double eps_gram = 1e-12;
};

/// Maximum violations of the six scalar relations
/// ⟨α,α⟩=0, ⟨γ,γ⟩=0, ⟨β,β⟩=1, ⟨α,γ⟩=1, ⟨α,β⟩=0, ⟨γ,β⟩=0.
struct FrameRelations {
  double alpha_alpha = 0.0;
  double gamma_gamma = 0.0;
  double beta_beta = 0.0;
  double alpha_gamma = 0.0;
  double alpha_beta = 0.0;
  double gamma_beta = 0.0;
  double beta_cross = 0.0;  ///< ‖β − α∧γ‖∞

  double max_scalar() const;
  void absorb(const FrameRelations& other);
};

FrameRelations frame_relations(const FrameSample& f);

FrameJet compute_frame_jet(const NullCurve& curve, double s, const FrameOptions& opt = {});
FrameSample compute_frame_at(const NullCurve& curve, double s, const FrameOptions& opt = {});

/// Frame samples on a grid plus the curve they came from.
class FramedCurve {
 public:
  FramedCurve() = default;
  /// Checks one sample per grid node with matching s; frame relations are not
  /// enforced here (frenet_residuals measures them).
  FramedCurve(NullCurve source, ParameterGrid grid, std::vector<FrameSample> samples,
              FrameOptions options = {}, std::size_t branch_flips = 0);

  const NullCurve& source() const { return source_; }
  const ParameterGrid& grid() const { return grid_; }
  const std::vector<FrameSample>& samples() const { return samples_; }
  const FrameOptions& options() const { return options_; }
  std::size_t size() const { return samples_.size(); }
  const FrameSample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t branch_flips() const { return branch_flips_; }
  const FrameRelations& relations() const { return relations_; }

  std::vector<double> kappa() const;
  std::vector<double> tau() const;
  std::vector<Vec3> alpha() const;
  std::vector<Vec3> beta() const;
  std::vector<Vec3> gamma() const;

  /// Stored sample when s is a grid node, otherwise computed from the source.
  FrameSample at(double s) const;

 private:
  NullCurve source_;
  ParameterGrid grid_;
  std::vector<FrameSample> samples_;
  FrameOptions options_;
  std::size_t branch_flips_ = 0;
  FrameRelations relations_;
};

/// Errors carry the offending s.
FramedCurve frame_curve(const NullCurve& curve, const ParameterGrid& grid, const FrameOptions& opt = {});

struct FrenetResiduals {
  double alpha_eq = 0.0;  ///< max ‖α′ − κβ‖
  double gamma_eq = 0.0;  ///< max ‖γ′ − τβ‖
  double beta_eq = 0.0;   ///< max ‖β′ + τα + κγ‖
  FrameRelations relations;

  double max_frenet() const;
};

/// Frame derivatives by differencing the stored arrays along the grid.
FrenetResiduals frenet_residuals(const FramedCurve& fc);

struct FrenetOptions {
  ode::Options ode{};
  bool renormalize = false;  ///< project the frame back onto the relations after each step
  Vec3 origin{};             ///< position at the initial parameter
  double eps_kappa = 1e-8;
  FrameOptions frame{};
};

/// Integrates a′ = α and the Cartan equations from `initial` (whose s is
/// the start parameter, normally grid.front()). The returned FramedCurve's
/// source is a FrenetIntegrated NullCurve spanning the grid.
FramedCurve integrate_frenet(const ScalarFunction& kappa, const ScalarFunction& tau,
                             const FrameSample& initial, const ParameterGrid& grid,
                             const FrenetOptions& opt = {});

/// Frame of H1 at t = 0: α=(1,0,1), γ=(−1/2,0,1/2), β=(0,1,0), κ=−1, τ=−1/2.
FrameSample helix1_initial_frame();

/// Builds a frame sample from α and γ (β = α∧γ) for use as initial data.
FrameSample make_frame(double s, const Vec3& alpha, const Vec3& gamma, double kappa = 0.0, double tau = 0.0);

enum class CurveClass { Geodesic, Helix, TorsionFree, Generic };

std::string_view to_string(CurveClass c) noexcept;

/// All matching labels in priority order Geodesic, Helix, TorsionFree;
/// {Generic} when none applies.
std::vector<CurveClass> classify(const FramedCurve& fc, double eps);
/// Reports {Geodesic} when framing fails with GeodesicDegeneracy at every
/// grid node; otherwise frames the curve and classifies the result.
std::vector<CurveClass> classify(const NullCurve& curve, const ParameterGrid& grid, double eps,
                                 const FrameOptions& opt = {});

}  // namespace nullsim
