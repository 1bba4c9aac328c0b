#include "nullsim/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullsim/errors.hpp"

namespace nullsim {

ParameterGrid::ParameterGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw GeometryError(ErrorCode::InvalidGrid, "grid needs at least two nodes");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw GeometryError(ErrorCode::InvalidGrid, "non-finite grid node");
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw GeometryError(ErrorCode::InvalidGrid, "grid is not strictly increasing", values_[i]);
  }
}

ParameterGrid ParameterGrid::uniform(Interval domain, std::size_t count) {
  if (count < 2 || !(domain.hi > domain.lo))
    throw GeometryError(ErrorCode::InvalidGrid, "uniform grid needs count >= 2 and lo < hi");
  std::vector<double> v(count);
  const double h = domain.length() / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = domain.lo + h * static_cast<double>(i);
  v.back() = domain.hi;
  return ParameterGrid(std::move(v));
}

double ParameterGrid::min_step() const {
  double m = values_[1] - values_[0];
  for (std::size_t i = 2; i < values_.size(); ++i) m = std::min(m, values_[i] - values_[i - 1]);
  return m;
}

double ParameterGrid::max_step() const {
  double m = values_[1] - values_[0];
  for (std::size_t i = 2; i < values_.size(); ++i) m = std::max(m, values_[i] - values_[i - 1]);
  return m;
}

double ParameterGrid::max_step_ratio() const {
  double r = 1.0;
  for (std::size_t i = 2; i < values_.size(); ++i) {
    const double h0 = values_[i - 1] - values_[i - 2], h1 = values_[i] - values_[i - 1];
    r = std::max(r, std::max(h0 / h1, h1 / h0));
  }
  return r;
}

std::size_t ParameterGrid::find(double s) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), s);
  if (it != values_.end() && *it == s) return static_cast<std::size_t>(it - values_.begin());
  return values_.size();
}

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::Analytic: return "analytic";
    case Backend::Sampled: return "sampled";
    case Backend::FrenetIntegrated: return "frenet";
  }
  return "unknown";
}

namespace {

class AnalyticBackend final : public CurveBackend {
 public:
  AnalyticBackend(Interval domain, std::vector<NullCurve::VectorFn> fns) : domain_(domain), fns_(std::move(fns)) {}
  Backend kind() const override { return Backend::Analytic; }
  Interval domain() const override { return domain_; }
  int max_derivative_order() const override { return static_cast<int>(fns_.size()) - 1; }
  Vec3 evaluate(double s, int order) const override { return fns_[static_cast<std::size_t>(order)](s); }

 private:
  Interval domain_;
  std::vector<NullCurve::VectorFn> fns_;
};

class SampledBackend final : public CurveBackend {
 public:
  SampledBackend(ParameterGrid grid, std::vector<Vec3> points) : grid_(std::move(grid)), points_(std::move(points)) {}
  Backend kind() const override { return Backend::Sampled; }
  Interval domain() const override { return grid_.span(); }
  int max_derivative_order() const override { return 3; }
  Vec3 evaluate(double s, int order) const override {
    if (order == 0) {
      const std::size_t i = grid_.find(s);
      if (i < grid_.size()) return points_[i];
    }
    return numerics::local_derivative<Vec3>(grid_.values(), points_, s, order, NullCurve::kStencilWidth);
  }

 private:
  ParameterGrid grid_;
  std::vector<Vec3> points_;
};

double domain_slack(const Interval& d) { return 1e-12 * std::max({1.0, std::abs(d.lo), std::abs(d.hi)}); }

}  // namespace

NullCurve::NullCurve(std::shared_ptr<const CurveBackend> backend, std::string name)
    : backend_(std::move(backend)), name_(std::move(name)) {
  const Interval d = backend_->domain();
  if (!(d.hi > d.lo)) throw GeometryError(ErrorCode::ValidationError, "degenerate curve domain");
}

NullCurve NullCurve::analytic(std::string name, Interval domain, std::vector<VectorFn> derivatives) {
  if (derivatives.size() < 2)
    throw GeometryError(ErrorCode::ValidationError, "analytic curve needs position and first derivative");
  return NullCurve(std::make_shared<AnalyticBackend>(domain, std::move(derivatives)), std::move(name));
}

NullCurve NullCurve::sampled(std::string name, ParameterGrid grid, std::vector<Vec3> points) {
  if (grid.size() < 5 || points.size() < 5)
    throw GeometryError(ErrorCode::TooFewSamples, "sampled curve needs at least 5 samples");
  if (points.size() != grid.size())
    throw GeometryError(ErrorCode::ValidationError, "sample count does not match grid size");
  for (const auto& p : points)
    if (!is_finite(p)) throw GeometryError(ErrorCode::ValidationError, "non-finite sample");
  if (grid.max_step_ratio() > kMaxStepRatio)
    throw GeometryError(ErrorCode::InvalidGrid, "grid steps vary too abruptly for finite differences");
  return NullCurve(std::make_shared<SampledBackend>(std::move(grid), std::move(points)), std::move(name));
}

Vec3 NullCurve::evaluate(double s, int order) const {
  if (order < 0 || order > backend_->max_derivative_order()) {
    throw GeometryError(ErrorCode::DerivativeUnavailable,
                        "derivative of order " + std::to_string(order) + " unavailable for " + name_, s);
  }
  const Interval d = backend_->domain();
  if (!std::isfinite(s) || !d.contains(s, domain_slack(d))) {
    std::ostringstream msg;
    msg << "s=" << s << " outside [" << d.lo << ", " << d.hi << "] of " << name_;
    throw GeometryError(ErrorCode::OutOfDomain, msg.str(), s);
  }
  return backend_->evaluate(std::clamp(s, d.lo, d.hi), order);
}

std::vector<Vec3> NullCurve::positions(const ParameterGrid& grid) const {
  std::vector<Vec3> out;
  out.reserve(grid.size());
  for (double s : grid.values()) out.push_back(evaluate(s, 0));
  return out;
}

NullCurve transformed(const NullCurve& curve, const LinearMap3& map, const Vec3& shift) {
  std::vector<NullCurve::VectorFn> fns;
  for (int k = 0; k <= curve.max_derivative_order(); ++k) {
    fns.push_back([curve, map, shift, k](double s) {
      const Vec3 v = map(curve.evaluate(s, k));
      return k == 0 ? v + shift : v;
    });
  }
  return NullCurve::analytic(curve.name() + "+lorentz", curve.domain(), std::move(fns));
}

NullCurve builtin_helix1(Interval domain) {
  return NullCurve::analytic(
      "helix1", domain,
      {[](double t) { return Vec3{t, std::cos(t), std::sin(t)}; },
       [](double t) { return Vec3{1.0, -std::sin(t), std::cos(t)}; },
       [](double t) { return Vec3{0.0, -std::cos(t), -std::sin(t)}; },
       [](double t) { return Vec3{0.0, std::sin(t), -std::cos(t)}; }});
}

NullCurve builtin_line(Interval domain, const Vec3& p0, const Vec3& d) {
  return NullCurve::analytic("geodesic", domain,
                             {[p0, d](double s) { return p0 + s * d; }, [d](double) { return d; },
                              [](double) { return Vec3{}; }, [](double) { return Vec3{}; }});
}

NullityReport nullity_check(const NullCurve& curve, const ParameterGrid& grid, double eps_null) {
  NullityReport r;
  r.eps_null = eps_null;
  for (double s : grid.values()) {
    const Vec3 t = curve.evaluate(s, 1);
    const double q = std::abs(lorentz_dot(t, t));
    if (s == grid.front() || q > r.max_residual) {
      r.max_residual = q;
      r.worst_s = s;
    }
  }
  r.passed = r.max_residual <= eps_null;
  return r;
}

namespace {
template <typename T>
std::vector<T> stencil_impl(std::span<const T> samples, const ParameterGrid& grid, int order) {
  if (samples.size() < 5) throw GeometryError(ErrorCode::TooFewSamples, "derivative stencil needs >= 5 samples");
  if (samples.size() != grid.size()) throw GeometryError(ErrorCode::ValidationError, "samples/grid size mismatch");
  if (order < 0 || order > 3) throw GeometryError(ErrorCode::DerivativeUnavailable, "stencil order must be 0..3");
  return numerics::differentiate_samples<T>(grid.values(), samples, order, NullCurve::kStencilWidth);
}
}  // namespace

std::vector<double> derivative_stencil(std::span<const double> samples, const ParameterGrid& grid, int order) {
  return stencil_impl<double>(samples, grid, order);
}

std::vector<Vec3> derivative_stencil(std::span<const Vec3> samples, const ParameterGrid& grid, int order) {
  return stencil_impl<Vec3>(samples, grid, order);
}

}  // namespace nullsim
