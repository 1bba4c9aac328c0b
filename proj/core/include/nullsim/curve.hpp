#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nullsim/lorentz.hpp"
#include "nullsim/numerics.hpp"

namespace nullsim {

/// Strictly increasing, finite parameter values.
class ParameterGrid {
 public:
  ParameterGrid() = default;
  explicit ParameterGrid(std::vector<double> values);

  static ParameterGrid uniform(Interval domain, std::size_t count);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  std::span<const double> values() const { return values_; }
  Interval span() const { return {values_.front(), values_.back()}; }

  double min_step() const;
  double max_step() const;
  /// Largest ratio between neighbouring steps (≥ 1).
  double max_step_ratio() const;
  /// Index of a node equal to s, or size() if none.
  std::size_t find(double s) const;

 private:
  std::vector<double> values_;
};

enum class Backend { Analytic, Sampled, FrenetIntegrated };

std::string_view to_string(Backend b) noexcept;

/// Evaluation strategy behind a NullCurve.
class CurveBackend {
 public:
  virtual ~CurveBackend() = default;
  virtual Backend kind() const = 0;
  virtual Interval domain() const = 0;
  virtual int max_derivative_order() const = 0;
  /// s is already domain-checked.
  virtual Vec3 evaluate(double s, int order) const = 0;
};

/// Parametrized curve a(s) of E³₁ with derivatives up to order 3. Immutable;
/// copies share the backend.
class NullCurve {
 public:
  using VectorFn = std::function<Vec3(double)>;

  NullCurve() = default;
  NullCurve(std::shared_ptr<const CurveBackend> backend, std::string name);

  /// `derivatives[k]` evaluates the k-th derivative; at least position and a′.
  static NullCurve analytic(std::string name, Interval domain, std::vector<VectorFn> derivatives);

  /// Positions on a grid; derivatives come from local 7-point interpolating
  /// stencils (order ≥ 4 for a‴). Rejects fewer than 5 samples and grids whose
  /// neighbouring steps differ by more than a factor kMaxStepRatio.
  static NullCurve sampled(std::string name, ParameterGrid grid, std::vector<Vec3> points);

  static constexpr double kMaxStepRatio = 2.0;
  static constexpr std::size_t kStencilWidth = 7;

  Backend backend() const { return backend_->kind(); }
  Interval domain() const { return backend_->domain(); }
  int max_derivative_order() const { return backend_->max_derivative_order(); }
  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(backend_); }

  /// Throws OutOfDomain or DerivativeUnavailable.
  Vec3 evaluate(double s, int order) const;
  Vec3 position(double s) const { return evaluate(s, 0); }
  Vec3 tangent(double s) const { return evaluate(s, 1); }

  std::vector<Vec3> positions(const ParameterGrid& grid) const;

 private:
  std::shared_ptr<const CurveBackend> backend_;
  std::string name_;
};

/// Image of `curve` under x ↦ map(x) + shift; frames transform covariantly for
/// proper Lorentz maps.
NullCurve transformed(const NullCurve& curve, const LinearMap3& map, const Vec3& shift = {});

/// a(t) = (t, cos t, sin t)
NullCurve builtin_helix1(Interval domain);
/// a(s) = p0 + s·d with no validation of d (see families::make_null_geodesic).
NullCurve builtin_line(Interval domain, const Vec3& p0, const Vec3& d);

struct NullityReport {
  double max_residual = 0.0;
  double worst_s = 0.0;
  double eps_null = 0.0;
  bool passed = false;
};

/// max |⟨a′, a′⟩| over the grid.
NullityReport nullity_check(const NullCurve& curve, const ParameterGrid& grid, double eps_null);

/// Node-wise finite-difference derivative of sampled data with the
/// 7-point local stencil (truncation O(h^(7−order)); one-sided at the ends).
/// Throws TooFewSamples below 5 samples.
std::vector<double> derivative_stencil(std::span<const double> samples, const ParameterGrid& grid, int order);
std::vector<Vec3> derivative_stencil(std::span<const Vec3> samples, const ParameterGrid& grid, int order);

}  // namespace nullsim
