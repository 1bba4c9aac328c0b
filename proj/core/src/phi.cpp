#include "nullsim/phi.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nullsim/errors.hpp"

namespace nullsim {
namespace {
constexpr std::size_t kWidth = NullCurve::kStencilWidth;
}

Interval PhiChart::phi_range() const {
  const auto [lo, hi] = std::minmax_element(phi_.begin(), phi_.end());
  return {*lo, *hi};
}

double PhiChart::phi_of_s(double s) const {
  return numerics::local_derivative<double>(s_, phi_, s, 0, kWidth);
}

double PhiChart::s_of_phi(double phi) const {
  return numerics::local_derivative<double>(phi_, s_, phi, 0, kWidth);
}

double PhiChart::f_of_phi(double phi) const {
  return numerics::local_derivative<double>(phi_, f_, phi, 0, kWidth);
}

bool PhiChart::contains_phi(double phi, double slack) const { return phi_range().contains(phi, slack); }

PhiChart total_curvature(const FramedCurve& fc, std::optional<double> s_anchor, double eps_kappa) {
  const auto kappa = fc.kappa();
  const auto tau = fc.tau();
  const auto& grid = fc.grid();

  int sign = 0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const int si = kappa[i] > 0.0 ? 1 : (kappa[i] < 0.0 ? -1 : 0);
    if (si == 0) continue;
    if (sign == 0) sign = si;
    else if (si != sign) throw GeometryError(ErrorCode::SignChange, "curvature changes sign", grid[i]);
  }
  for (std::size_t i = 0; i < kappa.size(); ++i)
    if (std::abs(kappa[i]) < eps_kappa) throw GeometryError(ErrorCode::KappaVanishes, "curvature vanishes", grid[i]);

  PhiChart chart;
  chart.s_.assign(grid.values().begin(), grid.values().end());
  chart.phi_ = numerics::cumulative_integral(grid.values(), kappa);
  chart.s_anchor_ = s_anchor.value_or(grid.front());
  if (!grid.span().contains(chart.s_anchor_))
    throw GeometryError(ErrorCode::OutOfDomain, "chart anchor outside the framed grid", chart.s_anchor_);
  const double phi_at_anchor = numerics::local_derivative<double>(chart.s_, chart.phi_, chart.s_anchor_, 0, kWidth);
  for (double& p : chart.phi_) p -= phi_at_anchor;
  chart.f_.resize(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) chart.f_[i] = tau[i] / kappa[i];
  chart.direction_ = sign;
  return chart;
}

double tangent_ode_residual(std::span<const double> phi, std::span<const Vec3> alpha, std::span<const double> f) {
  const std::size_t n = phi.size();
  if (n < kWidth) throw GeometryError(ErrorCode::TooFewSamples, "tangent residual needs >= 7 chart nodes");
  const auto d1 = numerics::differentiate_samples<Vec3>(phi, alpha, 1, kWidth);
  const auto d3 = numerics::differentiate_samples<Vec3>(phi, alpha, 3, kWidth);
  const auto df = numerics::differentiate_samples<double>(phi, f, 1, kWidth);
  const std::size_t skip = kWidth / 2;
  double worst = 0.0;
  for (std::size_t i = skip; i + skip < n; ++i)
    worst = std::max(worst, norm_euclid(d3[i] + 2.0 * f[i] * d1[i] + df[i] * alpha[i]));
  return worst;
}

double tangent_ode_residual(const FramedCurve& fc, const PhiChart& chart) {
  if (chart.size() != fc.size()) throw GeometryError(ErrorCode::ValidationError, "chart does not match framed curve");
  const auto alpha = fc.alpha();
  return tangent_ode_residual(chart.phi(), alpha, chart.f());
}

TangentField::TangentField(JetFn jet, Interval phi_domain, double phi_anchor)
    : jet_(std::move(jet)), domain_(phi_domain), anchor_(phi_anchor) {}

TangentField::Jet TangentField::jet(double phi) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(domain_.lo), std::abs(domain_.hi)});
  if (!domain_.contains(phi, slack))
    throw GeometryError(ErrorCode::OutOfDomain, "phi outside tangent field domain", phi);
  return jet_(std::clamp(phi, domain_.lo, domain_.hi));
}

TangentInit tangent_init_from_frame(const FrameSample& frame, double f) {
  return {frame.alpha, frame.beta, -frame.gamma - f * frame.alpha};
}

namespace {

Vec3 slot(const ode::State& y, std::size_t k) { return {y[3 * k], y[3 * k + 1], y[3 * k + 2]}; }

void put(ode::State& y, std::size_t k, const Vec3& v) {
  y[3 * k] = v.c1;
  y[3 * k + 1] = v.c2;
  y[3 * k + 2] = v.c3;
}

struct TangentDense {
  double phi0;
  ode::DenseSolution forward;
  ode::DenseSolution backward;

  TangentField::Jet operator()(double phi) const {
    ode::State y;
    (phi >= phi0 ? forward : backward).evaluate(phi, y);
    return {slot(y, 0), slot(y, 1), slot(y, 2)};
  }
};

}  // namespace

TangentSolution solve_tangent_ode(const ScalarFunction& f, const TangentInit& init, double phi0,
                                  std::span<const double> phi_nodes, const TangentOdeOptions& opt) {
  double lo = phi0, hi = phi0;
  for (double p : phi_nodes) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  ode::State y0(9);
  put(y0, 0, init.alpha);
  put(y0, 1, init.dalpha);
  put(y0, 2, init.d2alpha);
  const ode::Rhs rhs = [&f](double phi, const ode::State& y, ode::State& dy) {
    const Vec3 a = slot(y, 0), da = slot(y, 1), d2a = slot(y, 2);
    put(dy, 0, da);
    put(dy, 1, d2a);
    put(dy, 2, -2.0 * f(phi) * da - f.derivative(phi) * a);
  };
  const ode::DormandPrince solver(opt.ode);
  auto dense = std::make_shared<TangentDense>(
      TangentDense{phi0, solver.solve(rhs, phi0, y0, hi), solver.solve(rhs, phi0, y0, lo)});

  TangentSolution out;
  out.field = TangentField([dense](double phi) { return (*dense)(phi); }, {lo, hi}, phi0);
  out.phi.assign(phi_nodes.begin(), phi_nodes.end());
  out.alpha.reserve(phi_nodes.size());
  for (double p : phi_nodes) {
    Vec3 a = (*dense)(p)[0];
    out.max_null_drift = std::max(out.max_null_drift, std::abs(lorentz_dot(a, a)));
    if (opt.project_null) a.c1 = std::copysign(std::hypot(a.c2, a.c3), a.c1);
    out.alpha.push_back(a);
  }
  return out;
}

namespace {

struct Reconstruction {
  TangentField alpha;
  ScalarFunction kappa;
  double phi0 = 0.0;
  numerics::CumulativeIntegral<double> inv_kappa;
  numerics::CumulativeIntegral<Vec3> position;
  Vec3 anchor;
  double s_at_phi0 = 0.0;

  double s_of_phi(double phi) const { return inv_kappa(phi) - s_at_phi0; }

  double phi_of_s(double s) const {
    const Interval d = alpha.domain();
    if (kappa.is_constant()) return std::clamp(phi0 + kappa(phi0) * s, d.lo, d.hi);
    // s(φ) is monotone; safeguarded Newton on the bracket [d.lo, d.hi].
    const bool increasing = kappa(phi0) > 0.0;
    double lo = d.lo, hi = d.hi;
    double phi = std::clamp(phi0 + kappa(phi0) * s, lo, hi);
    for (int it = 0; it < 100; ++it) {
      const double g = s_of_phi(phi) - s;
      if (std::abs(g) <= 1e-15 * std::max(1.0, std::abs(s))) break;
      if ((g < 0.0) == increasing) lo = phi;
      else hi = phi;
      double next = phi - g * kappa(phi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == phi) break;
      phi = next;
    }
    return phi;
  }
};

}  // namespace

NullCurve reconstruct_curve(const TangentField& alpha, const ScalarFunction& kappa_of_phi, const Vec3& anchor,
                            double eps_kappa) {
  const Interval d = alpha.domain();
  int sign = 0;
  constexpr int kProbe = 513;
  for (int i = 0; i < kProbe; ++i) {
    const double phi = d.lo + d.length() * i / (kProbe - 1);
    const double k = kappa_of_phi(phi);
    if (std::abs(k) < eps_kappa) throw GeometryError(ErrorCode::KappaVanishes, "curvature vanishes", phi);
    const int si = k > 0.0 ? 1 : -1;
    if (sign == 0) sign = si;
    else if (si != sign) throw GeometryError(ErrorCode::SignChange, "curvature changes sign", phi);
  }

  auto rec = std::make_shared<Reconstruction>();
  rec->alpha = alpha;
  rec->kappa = kappa_of_phi;
  rec->phi0 = alpha.anchor();
  rec->anchor = anchor;
  rec->inv_kappa = numerics::CumulativeIntegral<double>(
      [k = kappa_of_phi](double phi) { return 1.0 / k(phi); }, d, 256);
  rec->s_at_phi0 = rec->inv_kappa(rec->phi0);
  const double s_a = rec->s_of_phi(d.lo), s_b = rec->s_of_phi(d.hi);
  const Interval s_domain{std::min(s_a, s_b), std::max(s_a, s_b)};

  auto tangent = [rec_raw = rec.get()](double s) { return rec_raw->alpha.alpha(rec_raw->phi_of_s(s)); };
  rec->position = numerics::CumulativeIntegral<Vec3>(tangent, s_domain, 256);
  const Vec3 p0 = rec->position(0.0);

  return NullCurve::analytic(
      "reconstructed", s_domain,
      {[rec, p0](double s) { return rec->anchor + rec->position(s) - p0; },
       [rec](double s) { return rec->alpha.alpha(rec->phi_of_s(s)); },
       [rec](double s) {
         const double phi = rec->phi_of_s(s);
         return rec->kappa(phi) * rec->alpha.jet(phi)[1];
       },
       [rec](double s) {
         const double phi = rec->phi_of_s(s);
         const auto j = rec->alpha.jet(phi);
         const double k = rec->kappa(phi);
         return rec->kappa.derivative(phi) * k * j[1] + k * k * j[2];
       }});
}

}  // namespace nullsim
