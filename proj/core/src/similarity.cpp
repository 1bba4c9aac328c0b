#include "nullsim/similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "nullsim/errors.hpp"

namespace nullsim {

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::Tangent: return "tangent";
    case Criterion::Normal: return "normal";
    case Criterion::Binormal: return "binormal";
    case Criterion::Ratio: return "ratio";
  }
  return "unknown";
}

VariableTransformation::VariableTransformation(ParameterGrid grid_b, std::vector<double> lambda,
                                               std::vector<double> s_a)
    : grid_b_(std::move(grid_b)), lambda_(std::move(lambda)), s_a_(std::move(s_a)) {
  if (lambda_.size() != grid_b_.size() || s_a_.size() != grid_b_.size())
    throw GeometryError(ErrorCode::ValidationError, "transformation arrays must match the grid");
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    if (!(lambda_[i] > 0.0))
      throw GeometryError(ErrorCode::NonPositiveLambda, "variable transformation needs lambda > 0", grid_b_[i]);
    if (i > 0 && !(s_a_[i] > s_a_[i - 1]))
      throw GeometryError(ErrorCode::NonPositiveLambda, "s_a(s_b) is not strictly increasing", grid_b_[i]);
  }
}

VariableTransformation VariableTransformation::from_lambda(const ScalarFunction& lambda, const ParameterGrid& grid_b,
                                                           Anchor anchor) {
  if (!grid_b.span().contains(anchor.s_b))
    throw GeometryError(ErrorCode::OutOfDomain, "anchor s_b outside the grid", anchor.s_b);
  std::vector<double> lam(grid_b.size()), sa(grid_b.size());
  for (std::size_t i = 0; i < grid_b.size(); ++i) {
    lam[i] = lambda(grid_b[i]);
    if (!(lam[i] > 0.0)) throw GeometryError(ErrorCode::NonPositiveLambda, "lambda must be positive", grid_b[i]);
  }
  if (lambda.is_constant()) {
    for (std::size_t i = 0; i < grid_b.size(); ++i) sa[i] = anchor.s_a + lam[0] * (grid_b[i] - anchor.s_b);
  } else {
    const numerics::CumulativeIntegral<double> integral([lambda](double s) { return lambda(s); }, grid_b.span(),
                                                        std::max<std::size_t>(256, grid_b.size()));
    const double base = integral(anchor.s_b);
    for (std::size_t i = 0; i < grid_b.size(); ++i) sa[i] = anchor.s_a + integral(grid_b[i]) - base;
  }
  return VariableTransformation(grid_b, std::move(lam), std::move(sa));
}

VariableTransformation VariableTransformation::identity(const ParameterGrid& grid) {
  return VariableTransformation(grid, std::vector<double>(grid.size(), 1.0),
                                std::vector<double>(grid.values().begin(), grid.values().end()));
}

namespace {

// Five-point derivative of g whose stencil is shifted to stay inside `range`.
double derivative_within(const std::function<double(double)>& g, double x, Interval range) {
  const double h = std::min(1e-3 * std::max(1.0, std::abs(x)), range.length() / 8.0);
  const double lo = std::clamp(x - 2.0 * h, range.lo, range.hi - 4.0 * h);
  std::array<double, 5> nodes{}, vals{};
  for (std::size_t j = 0; j < 5; ++j) {
    nodes[j] = lo + h * static_cast<double>(j);
    vals[j] = g(nodes[j]);
  }
  const auto w = numerics::fd_weights(nodes, x, 1);
  double acc = 0.0;
  for (std::size_t j = 0; j < 5; ++j) acc += w[1][j] * vals[j];
  return acc;
}

double slack_for(const Interval& d) { return 1e-9 * std::max({1.0, std::abs(d.lo), std::abs(d.hi)}); }

// Frame of `fc` at s; leaving the source domain is a transformation overflow.
FrameSample frame_at(const FramedCurve& fc, double s) {
  try {
    return fc.at(s);
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::OutOfDomain) throw;
    std::ostringstream msg;
    msg << "transformed parameter " << s << " leaves the curve domain";
    throw GeometryError(ErrorCode::DomainOverflow, msg.str(), s);
  }
}

Vec3 tangent_at(const NullCurve& c, double s) {
  try {
    return c.evaluate(s, 1);
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::OutOfDomain) throw;
    throw GeometryError(ErrorCode::DomainOverflow, "transformed parameter leaves the curve domain", s);
  }
}

LambdaStats stats_of(std::span<const double> lam) {
  LambdaStats st;
  if (lam.empty()) return st;
  const auto [lo, hi] = std::minmax_element(lam.begin(), lam.end());
  st.min = *lo;
  st.max = *hi;
  st.mean = numerics::mean(lam);
  return st;
}

std::vector<std::size_t> diagnostic_indices(std::size_t n) {
  constexpr std::size_t kCount = 5;
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  for (std::size_t k = 0; k < kCount; ++k) {
    const std::size_t i = (n - 1) * k / (kCount - 1);
    if (idx.empty() || idx.back() != i) idx.push_back(i);
  }
  return idx;
}

void finalize(SimilarityReport& r) {
  r.passed = true;
  for (const auto& res : r.residuals) r.passed = r.passed && std::isfinite(res.value) && res.value <= r.tol;
}

enum class Invariant { Kappa, Tau };

double invariant_of(const FrameSample& f, Invariant which) { return which == Invariant::Kappa ? f.kappa : f.tau; }

void require_nonvanishing(const FramedCurve& fc, Invariant which, double eps) {
  for (const auto& f : fc.samples()) {
    if (std::abs(invariant_of(f, which)) < eps) {
      if (which == Invariant::Kappa)
        throw GeometryError(ErrorCode::KappaVanishes, "curvature vanishes; criterion inapplicable", f.s);
      throw GeometryError(ErrorCode::TauVanishes, "torsion vanishes; criterion inapplicable", f.s);
    }
  }
}

// Solves ds_a/ds_b = q_b(s_b)/q_a(s_a) from the anchor over b's grid, with q
// the curvature or the torsion.
VariableTransformation infer_transformation(const FramedCurve& fa, const FramedCurve& fb, Anchor anchor,
                                            Invariant which, const SimilarityOptions& opt) {
  require_nonvanishing(fa, which, opt.eps_kappa);
  require_nonvanishing(fb, which, opt.eps_kappa);
  const auto& grid = fb.grid();
  if (!grid.span().contains(anchor.s_b))
    throw GeometryError(ErrorCode::OutOfDomain, "anchor s_b outside b's grid", anchor.s_b);
  if (!fa.source().domain().contains(anchor.s_a))
    throw GeometryError(ErrorCode::OutOfDomain, "anchor s_a outside a's domain", anchor.s_a);

  auto ratio = [&](double s_b, double s_a) {
    const double qa = invariant_of(frame_at(fa, s_a), which);
    const double qb = invariant_of(fb.at(s_b), which);
    if (std::abs(qa) < opt.eps_kappa) {
      throw GeometryError(which == Invariant::Kappa ? ErrorCode::KappaVanishes : ErrorCode::TauVanishes,
                          "invariant of a vanishes along the transformation", s_a);
    }
    const double lam = qb / qa;
    if (!(lam > 0.0)) throw GeometryError(ErrorCode::NonPositiveLambda, "inferred lambda is not positive", s_b);
    return lam;
  };
  const ode::Rhs rhs = [&](double s_b, const ode::State& y, ode::State& dy) { dy[0] = ratio(s_b, y[0]); };
  const ode::DormandPrince solver(opt.ode);
  const ode::State y0{anchor.s_a};
  const auto forward = solver.solve(rhs, anchor.s_b, y0, grid.back());
  const auto backward = solver.solve(rhs, anchor.s_b, y0, grid.front());

  std::vector<double> lam(grid.size()), sa(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s_b = grid[i];
    sa[i] = (s_b >= anchor.s_b ? forward : backward)(s_b)[0];
    lam[i] = ratio(s_b, sa[i]);
  }
  return VariableTransformation(grid, std::move(lam), std::move(sa));
}

Anchor require_anchor(std::optional<Anchor> anchor) {
  if (!anchor)
    throw GeometryError(ErrorCode::AnchorRequired, "corresponding start points (s_a0, s_b0) must be supplied");
  return *anchor;
}

}  // namespace

double span_for_image(const ScalarFunction& lambda, double s_b0, double image_length) {
  if (lambda.is_constant()) return image_length / lambda(s_b0);
  auto integral = [&](double len) {
    constexpr int kCells = 64;
    double acc = 0.0;
    for (int i = 0; i < kCells; ++i)
      acc += numerics::gauss_legendre<double>(lambda, s_b0 + len * i / kCells, s_b0 + len * (i + 1) / kCells);
    return acc;
  };
  double hi = image_length / std::max(lambda(s_b0), 1e-3);
  for (int i = 0; i < 60 && integral(hi) < image_length; ++i) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (integral(mid) < image_length ? lo : hi) = mid;
  }
  return lo;
}

NullCurve synthesize_similar(const NullCurve& a, const ScalarFunction& lambda, Interval s_b_domain,
                             const Vec3& anchor_point, std::optional<Anchor> anchor) {
  if (!(s_b_domain.hi > s_b_domain.lo)) throw GeometryError(ErrorCode::ValidationError, "empty s_b domain");
  const Anchor anc = anchor.value_or(Anchor{a.domain().lo, s_b_domain.lo});
  if (!s_b_domain.contains(anc.s_b)) throw GeometryError(ErrorCode::OutOfDomain, "anchor s_b outside domain", anc.s_b);

  constexpr int kProbe = 1025;
  for (int i = 0; i < kProbe; ++i) {
    const double s = s_b_domain.lo + s_b_domain.length() * i / (kProbe - 1);
    if (!(lambda(s) > 0.0)) throw GeometryError(ErrorCode::NonPositiveLambda, "lambda must be positive", s);
  }

  struct Synth {
    NullCurve a;
    ScalarFunction lambda;
    Anchor anchor;
    numerics::CumulativeIntegral<double> cumulative;
    double base = 0.0;
    numerics::CumulativeIntegral<Vec3> position;
    Vec3 p_base;
    Vec3 anchor_point;

    double s_a(double s_b) const {
      if (lambda.is_constant()) return anchor.s_a + lambda(s_b) * (s_b - anchor.s_b);
      return anchor.s_a + cumulative(s_b) - base;
    }
  };
  auto st = std::make_shared<Synth>();
  st->a = a;
  st->lambda = lambda;
  st->anchor = anc;
  st->anchor_point = anchor_point;
  if (!lambda.is_constant()) {
    st->cumulative = numerics::CumulativeIntegral<double>([lambda](double s) { return lambda(s); }, s_b_domain, 512);
    st->base = st->cumulative(anc.s_b);
  }

  const Interval da = a.domain();
  const double slack = slack_for(da);
  for (double s : {s_b_domain.lo, s_b_domain.hi}) {
    const double sa = st->s_a(s);
    if (!da.contains(sa, slack)) {
      std::ostringstream msg;
      msg << "s_a(" << s << ") = " << sa << " leaves [" << da.lo << ", " << da.hi << "]";
      throw GeometryError(ErrorCode::DomainOverflow, msg.str(), s);
    }
  }

  Synth* raw = st.get();
  st->position = numerics::CumulativeIntegral<Vec3>(
      [raw](double s) { return raw->a.evaluate(raw->s_a(s), 1); }, s_b_domain, 512);
  st->p_base = st->position(anc.s_b);

  std::vector<NullCurve::VectorFn> fns{
      [st](double s) { return st->anchor_point + st->position(s) - st->p_base; },
      [st](double s) { return st->a.evaluate(st->s_a(s), 1); },
  };
  if (a.max_derivative_order() >= 2)
    fns.push_back([st](double s) { return st->lambda(s) * st->a.evaluate(st->s_a(s), 2); });
  if (a.max_derivative_order() >= 3) {
    fns.push_back([st](double s) {
      const double sa = st->s_a(s);
      const double lam = st->lambda(s);
      return st->lambda.derivative(s) * st->a.evaluate(sa, 2) + lam * lam * st->a.evaluate(sa, 3);
    });
  }
  return NullCurve::analytic(a.name() + "~similar", s_b_domain, std::move(fns));
}

NullCurve synthesize_similar(const FramedCurve& fa, const ScalarFunction& lambda, Interval s_b_domain,
                             const Vec3& anchor_point, std::optional<Anchor> anchor) {
  return synthesize_similar(fa.source(), lambda, s_b_domain, anchor_point, anchor);
}

SimilarityReport check_tangent_similarity(const FramedCurve& fa, const FramedCurve& fb,
                                          const VariableTransformation& t, double tol) {
  SimilarityReport r;
  r.criterion = Criterion::Tangent;
  r.tol = tol;
  r.lambda = stats_of(t.lambda());
  const auto diag = diagnostic_indices(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s_b = t.grid_b()[i], s_a = t.s_a()[i];
    const double dev = norm_euclid(tangent_at(fa.source(), s_a) - tangent_at(fb.source(), s_b));
    r.max_vector_deviation = std::max(r.max_vector_deviation, dev);
    if (std::find(diag.begin(), diag.end(), i) != diag.end()) r.diagnostics.push_back({s_b, s_a, dev});
  }
  r.matched_points = t.size();
  r.residuals.push_back({"tangent", r.max_vector_deviation});
  finalize(r);
  return r;
}

CriterionResult normal_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                 const SimilarityOptions& opt) {
  const Anchor anc = require_anchor(anchor);
  auto t = infer_transformation(fa, fb, anc, Invariant::Kappa, opt);
  SimilarityReport r;
  r.criterion = Criterion::Normal;
  r.tol = opt.tol;
  r.lambda = stats_of(t.lambda());
  double tangent_dev = 0.0;
  const auto diag = diagnostic_indices(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrameSample a = frame_at(fa, t.s_a()[i]);
    const FrameSample& b = fb[i];
    const double dev = norm_euclid(a.beta - b.beta);
    r.max_vector_deviation = std::max(r.max_vector_deviation, dev);
    // κ_a β_a ds_a/ds_b = κ_b β_b
    r.max_scalar_deviation =
        std::max(r.max_scalar_deviation, norm_euclid(t.lambda()[i] * a.kappa * a.beta - b.kappa * b.beta));
    tangent_dev = std::max(tangent_dev, norm_euclid(a.alpha - b.alpha));
    if (std::find(diag.begin(), diag.end(), i) != diag.end()) r.diagnostics.push_back({b.s, a.s, dev});
  }
  r.matched_points = t.size();
  r.residuals = {{"normal", r.max_vector_deviation},
                 {"derivative_consistency", r.max_scalar_deviation},
                 {"tangent_cross_check", tangent_dev}};
  finalize(r);
  return {std::move(r), std::move(t)};
}

CriterionResult binormal_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                   const SimilarityOptions& opt) {
  const Anchor anc = require_anchor(anchor);
  auto t = infer_transformation(fa, fb, anc, Invariant::Tau, opt);
  SimilarityReport r;
  r.criterion = Criterion::Binormal;
  r.tol = opt.tol;
  r.lambda = stats_of(t.lambda());
  double normal_dev = 0.0, alpha_recovery = 0.0;
  const auto diag = diagnostic_indices(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrameSample a = frame_at(fa, t.s_a()[i]);
    const FrameSample& b = fb[i];
    const double dev = norm_euclid(a.gamma - b.gamma);
    r.max_vector_deviation = std::max(r.max_vector_deviation, dev);
    // τ_a β_a ds_a/ds_b = τ_b β_b
    r.max_scalar_deviation =
        std::max(r.max_scalar_deviation, norm_euclid(t.lambda()[i] * a.tau * a.beta - b.tau * b.beta));
    normal_dev = std::max(normal_dev, norm_euclid(a.beta - b.beta));
    // α is the null vector ⊥ β with ⟨α, γ⟩ = 1, so (β_b, γ_b) determine α_b.
    alpha_recovery = std::max(alpha_recovery, norm_euclid(null_partner(b.gamma, b.beta) - a.alpha));
    if (std::find(diag.begin(), diag.end(), i) != diag.end()) r.diagnostics.push_back({b.s, a.s, dev});
  }
  r.matched_points = t.size();
  r.residuals = {{"binormal", r.max_vector_deviation},
                 {"derivative_consistency", r.max_scalar_deviation},
                 {"normal_equality", normal_dev},
                 {"tangent_recovery", alpha_recovery}};
  finalize(r);
  return {std::move(r), std::move(t)};
}

SimilarityReport ratio_criterion(const FramedCurve& fa, const FramedCurve& fb, std::optional<Anchor> anchor,
                                 const SimilarityOptions& opt) {
  const Anchor anc = require_anchor(anchor);
  const PhiChart chart_a = total_curvature(fa, anc.s_a, opt.eps_kappa);
  const PhiChart chart_b = total_curvature(fb, anc.s_b, opt.eps_kappa);
  if (chart_a.direction() != chart_b.direction())
    throw GeometryError(ErrorCode::NonPositiveLambda, "curvatures have opposite signs; lambda would be negative");

  SimilarityReport r;
  r.criterion = Criterion::Ratio;
  r.tol = opt.tol;
  const Interval range_a = chart_a.phi_range();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(range_a.lo), std::abs(range_a.hi)));

  std::vector<std::size_t> matched;
  std::vector<double> s_a_of, lam;
  double ratio_dev = 0.0;
  for (std::size_t i = 0; i < chart_b.size(); ++i) {
    const double phi = chart_b.phi()[i];
    if (!range_a.contains(phi, slack)) continue;
    const double s_a = chart_a.s_of_phi(phi);
    const FrameSample a = frame_at(fa, s_a);
    const double dev = std::abs(a.tau / a.kappa - chart_b.f()[i]);
    ratio_dev = std::max(ratio_dev, dev);
    matched.push_back(i);
    s_a_of.push_back(s_a);
    lam.push_back(fb[i].kappa / a.kappa);
  }
  if (matched.empty())
    throw GeometryError(ErrorCode::DomainOverflow, "total-curvature ranges of the two curves do not overlap");
  const auto diag = diagnostic_indices(matched.size());
  for (std::size_t k : diag) {
    const std::size_t i = matched[k];
    const FrameSample a = frame_at(fa, s_a_of[k]);
    r.diagnostics.push_back({fb[i].s, s_a_of[k], std::abs(a.tau / a.kappa - chart_b.f()[i])});
  }
  r.matched_points = matched.size();
  r.lambda = stats_of(lam);
  r.max_scalar_deviation = ratio_dev;
  r.ratio_equal = ratio_dev <= opt.tol;

  const FrameSample fa0 = frame_at(fa, anc.s_a);
  const FrameSample fb0 = fb.at(anc.s_b);
  const double anchor_dev = std::max({norm_euclid(fa0.alpha - fb0.alpha), norm_euclid(fa0.beta - fb0.beta),
                                      norm_euclid(fa0.gamma - fb0.gamma)});
  r.frames_agree = anchor_dev <= opt.tol;
  r.residuals = {{"ratio", ratio_dev}, {"anchor_frame", anchor_dev}};
  r.max_vector_deviation = anchor_dev;

  if (*r.frames_agree && *r.ratio_equal) {
    // Equal ratios and equal initial data: both tangents solve the same
    // third-order equation, so they must coincide with its solution.
    const std::function<double(double)> ratio_a = [&](double phi) {
      const FrameSample a = frame_at(fa, chart_a.s_of_phi(std::clamp(phi, range_a.lo, range_a.hi)));
      return a.tau / a.kappa;
    };
    const ScalarFunction f(ratio_a, [&](double phi) { return derivative_within(ratio_a, phi, range_a); });
    std::vector<double> nodes;
    nodes.reserve(matched.size());
    for (std::size_t i : matched) nodes.push_back(chart_b.phi()[i]);
    const TangentOdeOptions ode_opt{opt.ode, false};
    const auto sol = solve_tangent_ode(f, tangent_init_from_frame(fa0, fa0.tau / fa0.kappa), 0.0, nodes, ode_opt);
    double dev_a = 0.0, dev_b = 0.0;
    for (std::size_t k = 0; k < matched.size(); ++k) {
      dev_a = std::max(dev_a, norm_euclid(sol.alpha[k] - tangent_at(fa.source(), s_a_of[k])));
      dev_b = std::max(dev_b, norm_euclid(sol.alpha[k] - fb[matched[k]].alpha));
    }
    r.residuals.push_back({"ode_tangent_a", dev_a});
    r.residuals.push_back({"ode_tangent_b", dev_b});
    r.max_vector_deviation = std::max({anchor_dev, dev_a, dev_b});
  }
  finalize(r);
  return r;
}

ScalingReport curvature_scaling_check(const FramedCurve& fa, const FramedCurve& fb, const VariableTransformation& t,
                                      double tol) {
  ScalingReport r;
  r.tol = tol;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrameSample a = frame_at(fa, t.s_a()[i]);
    const FrameSample b = fb.at(t.grid_b()[i]);
    const double lam = t.lambda()[i];
    r.kappa_residual = std::max(r.kappa_residual, std::abs(b.kappa - lam * a.kappa));
    r.tau_residual = std::max(r.tau_residual, std::abs(b.tau - lam * a.tau));
  }
  r.passed = r.kappa_residual <= tol && r.tau_residual <= tol;
  return r;
}

BertrandResult is_bertrand_pair(const FramedCurve& fa, const FramedCurve& fb, const VariableTransformation& t,
                                double tol) {
  BertrandResult r;
  r.factor.reserve(t.size());
  double factor_dev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrameSample a = frame_at(fa, t.s_a()[i]);
    const FrameSample b = fb.at(t.grid_b()[i]);
    r.max_wedge = std::max(r.max_wedge, norm_euclid(lorentz_cross(a.beta, b.beta)));
    const double factor = lorentz_dot(a.beta, b.beta) / lorentz_dot(a.beta, a.beta);
    r.factor.push_back(factor);
    factor_dev = std::max(factor_dev, std::abs(factor - 1.0));
  }
  r.dependent = r.max_wedge <= tol;
  r.unit_factor = r.dependent && factor_dev <= tol;
  return r;
}

Anchor search_anchor(const FramedCurve& fa, const FramedCurve& fb, double s_b0) {
  const Vec3 target = fb.at(s_b0).alpha;
  Anchor best{fa.grid().front(), s_b0};
  double best_dev = std::numeric_limits<double>::infinity();
  for (const auto& f : fa.samples()) {
    const double dev = norm_euclid(f.alpha - target);
    if (dev < best_dev) {
      best_dev = dev;
      best.s_a = f.s;
    }
  }
  return best;
}

}  // namespace nullsim
