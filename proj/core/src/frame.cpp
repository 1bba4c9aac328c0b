#include "nullsim/frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullsim/errors.hpp"

namespace nullsim {
namespace {

// Solves rows · x = rhs by Cramer's rule.
Vec3 solve3(const Vec3& r0, const Vec3& r1, const Vec3& r2, const Vec3& rhs) {
  auto det = [](const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.c1 * (b.c2 * c.c3 - b.c3 * c.c2) - a.c2 * (b.c1 * c.c3 - b.c3 * c.c1) +
           a.c3 * (b.c1 * c.c2 - b.c2 * c.c1);
  };
  const Vec3 col0{r0.c1, r1.c1, r2.c1}, col1{r0.c2, r1.c2, r2.c2}, col2{r0.c3, r1.c3, r2.c3};
  const double d = det(col0, col1, col2);
  return {det(rhs, col1, col2) / d, det(col0, rhs, col2) / d, det(col0, col1, rhs) / d};
}

// η·v, so that ⟨v, x⟩ is the Euclidean dot of eta(v) with x.
Vec3 eta(const Vec3& v) { return {-v.c1, v.c2, v.c3}; }

}  // namespace

double FrameRelations::max_scalar() const {
  return std::max({alpha_alpha, gamma_gamma, beta_beta, alpha_gamma, alpha_beta, gamma_beta});
}

void FrameRelations::absorb(const FrameRelations& o) {
  alpha_alpha = std::max(alpha_alpha, o.alpha_alpha);
  gamma_gamma = std::max(gamma_gamma, o.gamma_gamma);
  beta_beta = std::max(beta_beta, o.beta_beta);
  alpha_gamma = std::max(alpha_gamma, o.alpha_gamma);
  alpha_beta = std::max(alpha_beta, o.alpha_beta);
  gamma_beta = std::max(gamma_beta, o.gamma_beta);
  beta_cross = std::max(beta_cross, o.beta_cross);
}

FrameRelations frame_relations(const FrameSample& f) {
  FrameRelations r;
  r.alpha_alpha = std::abs(lorentz_dot(f.alpha, f.alpha));
  r.gamma_gamma = std::abs(lorentz_dot(f.gamma, f.gamma));
  r.beta_beta = std::abs(lorentz_dot(f.beta, f.beta) - 1.0);
  r.alpha_gamma = std::abs(lorentz_dot(f.alpha, f.gamma) - 1.0);
  r.alpha_beta = std::abs(lorentz_dot(f.alpha, f.beta));
  r.gamma_beta = std::abs(lorentz_dot(f.gamma, f.beta));
  r.beta_cross = norm_inf(f.beta - lorentz_cross(f.alpha, f.gamma));
  return r;
}

FrameJet compute_frame_jet(const NullCurve& curve, double s, const FrameOptions& opt) {
  const Vec3 a1 = curve.evaluate(s, 1);
  const Vec3 a2 = curve.evaluate(s, 2);
  const Vec3 a3 = curve.evaluate(s, 3);

  const double scale1 = norm_inf(a1);
  if (scale1 == 0.0) throw GeometryError(ErrorCode::NotNull, "velocity vanishes", s);
  if (std::abs(lorentz_dot(a1, a1)) > opt.eps_null * scale1 * scale1) {
    std::ostringstream msg;
    msg << "<a',a'> = " << lorentz_dot(a1, a1) << " at s=" << s;
    throw GeometryError(ErrorCode::NotNull, msg.str(), s);
  }
  const double q = lorentz_dot(a2, a2);
  const double scale = std::max(scale1, norm_inf(a2));
  if (q <= opt.eps_gram * scale * scale) {
    std::ostringstream msg;
    msg << "a'' is zero or proportional to a' at s=" << s;
    throw GeometryError(ErrorCode::GeodesicDegeneracy, msg.str(), s);
  }

  FrameJet jet;
  FrameSample& f = jet.frame;
  f.s = s;
  f.alpha = a1;
  const Vec3 beta0 = a2 / std::sqrt(q);
  f.gamma = null_partner(a1, beta0);
  f.beta = lorentz_cross(f.alpha, f.gamma);
  f.kappa = lorentz_dot(a2, f.beta);

  // Differentiate ⟨α,γ⟩ = 1, ⟨γ,a″⟩ = 0, ⟨γ,γ⟩ = 0 along the curve.
  const Vec3 rhs{-lorentz_dot(a2, f.gamma), -lorentz_dot(f.gamma, a3), 0.0};
  jet.dgamma = solve3(eta(a1), eta(a2), eta(f.gamma), rhs);
  jet.dalpha = a2;
  jet.dbeta = lorentz_cross(a2, f.gamma) + lorentz_cross(a1, jet.dgamma);
  jet.tau_from_gamma = lorentz_dot(jet.dgamma, f.beta);
  jet.tau_from_beta = -lorentz_dot(jet.dbeta, f.gamma);
  f.tau = jet.tau_from_beta;
  return jet;
}

FrameSample compute_frame_at(const NullCurve& curve, double s, const FrameOptions& opt) {
  return compute_frame_jet(curve, s, opt).frame;
}

FramedCurve::FramedCurve(NullCurve source, ParameterGrid grid, std::vector<FrameSample> samples,
                         FrameOptions options, std::size_t branch_flips)
    : source_(std::move(source)),
      grid_(std::move(grid)),
      samples_(std::move(samples)),
      options_(options),
      branch_flips_(branch_flips) {
  if (samples_.size() != grid_.size())
    throw GeometryError(ErrorCode::ValidationError, "one frame sample per grid node required");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].s != grid_[i])
      throw GeometryError(ErrorCode::ValidationError, "frame sample parameter does not match grid", grid_[i]);
    relations_.absorb(frame_relations(samples_[i]));
  }
}

std::vector<double> FramedCurve::kappa() const {
  std::vector<double> v;
  v.reserve(samples_.size());
  for (const auto& f : samples_) v.push_back(f.kappa);
  return v;
}

std::vector<double> FramedCurve::tau() const {
  std::vector<double> v;
  v.reserve(samples_.size());
  for (const auto& f : samples_) v.push_back(f.tau);
  return v;
}

std::vector<Vec3> FramedCurve::alpha() const {
  std::vector<Vec3> v;
  v.reserve(samples_.size());
  for (const auto& f : samples_) v.push_back(f.alpha);
  return v;
}

std::vector<Vec3> FramedCurve::beta() const {
  std::vector<Vec3> v;
  v.reserve(samples_.size());
  for (const auto& f : samples_) v.push_back(f.beta);
  return v;
}

std::vector<Vec3> FramedCurve::gamma() const {
  std::vector<Vec3> v;
  v.reserve(samples_.size());
  for (const auto& f : samples_) v.push_back(f.gamma);
  return v;
}

FrameSample FramedCurve::at(double s) const {
  const std::size_t i = grid_.find(s);
  if (i < grid_.size()) return samples_[i];
  return compute_frame_at(source_, s, options_);
}

FramedCurve frame_curve(const NullCurve& curve, const ParameterGrid& grid, const FrameOptions& opt) {
  std::vector<FrameSample> samples;
  samples.reserve(grid.size());
  std::size_t flips = 0;
  for (double s : grid.values()) {
    samples.push_back(compute_frame_at(curve, s, opt));
    if (samples.size() > 1) {
      const auto& prev = samples[samples.size() - 2];
      if (lorentz_dot(prev.beta, samples.back().beta) < 0.0) ++flips;
    }
  }
  return FramedCurve(curve, grid, std::move(samples), opt, flips);
}

double FrenetResiduals::max_frenet() const { return std::max({alpha_eq, gamma_eq, beta_eq}); }

FrenetResiduals frenet_residuals(const FramedCurve& fc) {
  const auto& grid = fc.grid();
  if (grid.size() < 5) throw GeometryError(ErrorCode::TooFewSamples, "frenet residuals need >= 5 samples");
  const auto alpha = fc.alpha(), beta = fc.beta(), gamma = fc.gamma();
  const auto da = derivative_stencil(std::span<const Vec3>(alpha), grid, 1);
  const auto db = derivative_stencil(std::span<const Vec3>(beta), grid, 1);
  const auto dg = derivative_stencil(std::span<const Vec3>(gamma), grid, 1);
  FrenetResiduals r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& f = fc[i];
    r.alpha_eq = std::max(r.alpha_eq, norm_euclid(da[i] - f.kappa * f.beta));
    r.gamma_eq = std::max(r.gamma_eq, norm_euclid(dg[i] - f.tau * f.beta));
    r.beta_eq = std::max(r.beta_eq, norm_euclid(db[i] + f.tau * f.alpha + f.kappa * f.gamma));
  }
  r.relations = fc.relations();
  return r;
}

namespace {

constexpr std::size_t kFrenetDim = 12;

Vec3 slot(const ode::State& y, std::size_t k) { return {y[3 * k], y[3 * k + 1], y[3 * k + 2]}; }

void put(ode::State& y, std::size_t k, const Vec3& v) {
  y[3 * k] = v.c1;
  y[3 * k + 1] = v.c2;
  y[3 * k + 2] = v.c3;
}

class FrenetBackend final : public CurveBackend {
 public:
  FrenetBackend(Interval domain, double s0, ode::DenseSolution backward, ode::DenseSolution forward,
                ScalarFunction kappa, ScalarFunction tau)
      : domain_(domain),
        s0_(s0),
        backward_(std::move(backward)),
        forward_(std::move(forward)),
        kappa_(std::move(kappa)),
        tau_(std::move(tau)) {}

  Backend kind() const override { return Backend::FrenetIntegrated; }
  Interval domain() const override { return domain_; }
  int max_derivative_order() const override { return 3; }

  Vec3 evaluate(double s, int order) const override {
    ode::State y;
    (s >= s0_ ? forward_ : backward_).evaluate(s, y);
    switch (order) {
      case 0: return slot(y, 0);
      case 1: return slot(y, 1);
      case 2: return kappa_(s) * slot(y, 2);
      default: {
        const double k = kappa_(s), t = tau_(s);
        const Vec3 alpha = slot(y, 1), beta = slot(y, 2), gamma = slot(y, 3);
        return kappa_.derivative(s) * beta + k * (-t * alpha - k * gamma);
      }
    }
  }

 private:
  Interval domain_;
  double s0_;
  ode::DenseSolution backward_;
  ode::DenseSolution forward_;
  ScalarFunction kappa_;
  ScalarFunction tau_;
};

void project_frame(ode::State& y) {
  Vec3 alpha = slot(y, 1), beta = slot(y, 2), gamma = slot(y, 3);
  const double spatial = std::hypot(alpha.c2, alpha.c3);
  if (spatial > 0.0) {
    const double k = std::abs(alpha.c1) / spatial;
    alpha.c2 *= k;
    alpha.c3 *= k;
  }
  beta = beta - lorentz_dot(beta, gamma) * alpha - lorentz_dot(beta, alpha) * gamma;
  beta = beta / std::sqrt(lorentz_dot(beta, beta));
  gamma = null_partner(alpha, beta);
  beta = lorentz_cross(alpha, gamma);
  put(y, 1, alpha);
  put(y, 2, beta);
  put(y, 3, gamma);
}

}  // namespace

FramedCurve integrate_frenet(const ScalarFunction& kappa, const ScalarFunction& tau, const FrameSample& initial,
                             const ParameterGrid& grid, const FrenetOptions& opt) {
  const FrameRelations rel = frame_relations(initial);
  if (rel.max_scalar() > 1e-10 || rel.beta_cross > 1e-10)
    throw GeometryError(ErrorCode::BadInitialFrame, "initial frame violates the Cartan relations", initial.s);
  if (!grid.span().contains(initial.s))
    throw GeometryError(ErrorCode::BadInput, "initial parameter lies outside the grid", initial.s);
  for (double s : grid.values()) {
    const double k = kappa(s);
    if (!std::isfinite(k) || std::abs(k) < opt.eps_kappa)
      throw GeometryError(ErrorCode::BadInput, "curvature vanishes; the Cartan frame is undefined", s);
    if (!std::isfinite(tau(s))) throw GeometryError(ErrorCode::BadInput, "torsion is not finite", s);
  }

  ode::State y0(kFrenetDim);
  put(y0, 0, opt.origin);
  put(y0, 1, initial.alpha);
  put(y0, 2, initial.beta);
  put(y0, 3, initial.gamma);

  const ode::Rhs rhs = [&kappa, &tau](double s, const ode::State& y, ode::State& dy) {
    const double k = kappa(s), t = tau(s);
    const Vec3 alpha = slot(y, 1), beta = slot(y, 2), gamma = slot(y, 3);
    put(dy, 0, alpha);
    put(dy, 1, k * beta);
    put(dy, 2, -t * alpha - k * gamma);
    put(dy, 3, t * beta);
  };

  ode::Options ode_opt = opt.ode;
  // Landing on every node keeps sampled frames free of interpolation joins.
  if (ode_opt.stops.empty()) ode_opt.stops.assign(grid.values().begin(), grid.values().end());
  if (opt.renormalize) ode_opt.projection = [](double, ode::State& y) { project_frame(y); };
  const ode::DormandPrince solver(ode_opt);
  auto forward = solver.solve(rhs, initial.s, y0, grid.back());
  auto backward = solver.solve(rhs, initial.s, y0, grid.front());

  auto backend = std::make_shared<FrenetBackend>(grid.span(), initial.s, std::move(backward), std::move(forward),
                                                 kappa, tau);
  NullCurve curve(std::move(backend), "frenet");
  return frame_curve(curve, grid, opt.frame);
}

FrameSample helix1_initial_frame() {
  return make_frame(0.0, {1.0, 0.0, 1.0}, {-0.5, 0.0, 0.5}, -1.0, -0.5);
}

FrameSample make_frame(double s, const Vec3& alpha, const Vec3& gamma, double kappa, double tau) {
  FrameSample f;
  f.s = s;
  f.alpha = alpha;
  f.gamma = gamma;
  f.beta = lorentz_cross(alpha, gamma);
  f.kappa = kappa;
  f.tau = tau;
  return f;
}

std::string_view to_string(CurveClass c) noexcept {
  switch (c) {
    case CurveClass::Geodesic: return "geodesic";
    case CurveClass::Helix: return "helix";
    case CurveClass::TorsionFree: return "torsion_free";
    case CurveClass::Generic: return "generic";
  }
  return "unknown";
}

std::vector<CurveClass> classify(const FramedCurve& fc, double eps) {
  const auto k = fc.kappa(), t = fc.tau();
  std::vector<CurveClass> labels;
  if (numerics::stdev(k) <= eps && numerics::stdev(t) <= eps) labels.push_back(CurveClass::Helix);
  double max_tau = 0.0;
  for (double v : t) max_tau = std::max(max_tau, std::abs(v));
  if (max_tau <= eps) labels.push_back(CurveClass::TorsionFree);
  if (labels.empty()) labels.push_back(CurveClass::Generic);
  return labels;
}

std::vector<CurveClass> classify(const NullCurve& curve, const ParameterGrid& grid, double eps,
                                 const FrameOptions& opt) {
  std::size_t degenerate = 0;
  for (double s : grid.values()) {
    try {
      compute_frame_at(curve, s, opt);
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::GeodesicDegeneracy) throw;
      ++degenerate;
    }
  }
  if (degenerate == grid.size()) return {CurveClass::Geodesic};
  return classify(frame_curve(curve, grid, opt), eps);
}

}  // namespace nullsim
