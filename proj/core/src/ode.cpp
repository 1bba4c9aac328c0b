#include "nullsim/ode.hpp"

#include <algorithm>
#include <cmath>

#include "nullsim/errors.hpp"

namespace nullsim::ode {
namespace {

// Dormand–Prince 5(4) tableau (FSAL) and dense-output coefficients from
// Hairer, Nørsett & Wanner, Solving ODEs I, routine DOPRI5.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

bool DenseSolution::covers(double t, double slack) const {
  const double lo = std::min(t_begin_, t_end_), hi = std::max(t_begin_, t_end_);
  return t >= lo - slack && t <= hi + slack;
}

State DenseSolution::operator()(double t) const {
  State out(dim_);
  evaluate(t, out);
  return out;
}

void DenseSolution::evaluate(double t, State& out) const {
  out.resize(dim_);
  if (steps_.empty()) {
    out = final_state_;
    return;
  }
  const bool forward = t_end_ >= t_begin_;
  // Steps are stored in integration order; find the one containing t.
  std::size_t lo = 0, hi = steps_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const bool after = forward ? t >= steps_[mid].t0 : t <= steps_[mid].t0;
    if (after) lo = mid;
    else hi = mid;
  }
  const Step& st = steps_[lo];
  const double theta = (t - st.t0) / st.h;
  const double theta1 = 1.0 - theta;
  const std::size_t n = dim_;
  const double* r = st.rcont.data();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = r[i] + theta * (r[n + i] + theta1 * (r[2 * n + i] + theta * (r[3 * n + i] + theta1 * r[4 * n + i])));
  }
}

DenseSolution DormandPrince::solve(const Rhs& rhs, double t0, const State& y0, double t1) const {
  const std::size_t n = y0.size();
  DenseSolution sol;
  sol.t_begin_ = t0;
  sol.t_end_ = t1;
  sol.dim_ = n;
  sol.final_state_ = y0;
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  State y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);

  rhs(t0, y, k1);

  auto error_norm = [&](const State& yn, const State& yo, double h) {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::max(std::abs(yo[i]), std::abs(yn[i]));
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]) / sk;
      err += ei * ei;
    }
    return std::sqrt(err / static_cast<double>(n));
  };

  double h;
  if (opt_.fixed_step) {
    h = std::abs(*opt_.fixed_step);
  } else if (opt_.initial_step > 0.0) {
    h = opt_.initial_step;
  } else {
    // Hairer's starting step heuristic.
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1n += (k1[i] / sk) * (k1[i] / sk);
    }
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dir * h0 * k1[i];
    rhs(t0 + dir * h0, tmp, k2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      d2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double h1 = std::max(d1n, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1n, d2), 1.0 / 5.0);
    h = std::min(100 * h0, h1);
  }
  if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);

  std::vector<double> stops;
  for (double ts : opt_.stops)
    if (dir * (ts - t0) > 0.0 && dir * (t1 - ts) > 0.0) stops.push_back(ts);
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return dir * a < dir * b; });
  std::size_t next_stop = 0;

  double t = t0;
  double fac_old = 1e-4;
  bool last_rejected = false;
  std::size_t nsteps = 0;
  const double uround = 2.3e-16;

  while (dir * (t1 - t) > 0.0) {
    if (nsteps++ >= opt_.max_steps)
      throw GeometryError(ErrorCode::IntegratorFailure, "step budget exhausted", t);
    if (0.1 * h <= std::abs(t) * uround)
      throw GeometryError(ErrorCode::IntegratorFailure, "step size underflow", t);
    bool final_step = false;
    bool at_stop = false;
    const double h_wanted = h;
    while (next_stop < stops.size() && dir * (stops[next_stop] - t) <= 0.0) ++next_stop;
    if (next_stop < stops.size() && (t + dir * h - stops[next_stop]) * dir >= 0.0) {
      h = std::abs(stops[next_stop] - t);
      at_stop = true;
    } else if ((t + dir * h - t1) * dir >= 0.0) {
      h = std::abs(t1 - t);
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + hs, y_new, k7);

    double err = 0.0;
    bool accept = true;
    double h_next = h;
    if (!opt_.fixed_step) {
      err = error_norm(y_new, y, hs);
      // Lund-stabilised step control as in DOPRI5.
      const double expo1 = 0.2 - 0.04 * 0.75;
      const double fac11 = std::pow(std::max(err, 1e-300), expo1);
      double fac = fac11 / std::pow(fac_old, 0.04);
      fac = std::clamp(fac / 0.9, 1.0 / 10.0, 1.0 / 0.2);
      h_next = h / fac;
      accept = err <= 1.0;
      if (accept) {
        fac_old = std::max(err, 1e-4);
        if (last_rejected) h_next = std::min(h_next, h);
      } else {
        h_next = h / std::min(1.0 / 0.2, fac11 / 0.9);
      }
      if (opt_.max_step > 0.0) h_next = std::min(h_next, opt_.max_step);
    }

    if (at_stop && accept) h_next = std::max(h_next, h_wanted);
    if (opt_.max_step > 0.0) h_next = std::min(h_next, opt_.max_step);

    if (!accept) {
      ++sol.rejected_;
      last_rejected = true;
      h = h_next;
      continue;
    }
    last_rejected = false;

    DenseSolution::Step st;
    st.t0 = t;
    st.h = hs;
    st.rcont.resize(5 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y_new[i] - y[i];
      const double bspl = hs * k1[i] - ydiff;
      st.rcont[i] = y[i];
      st.rcont[n + i] = ydiff;
      st.rcont[2 * n + i] = bspl;
      st.rcont[3 * n + i] = ydiff - hs * k7[i] - bspl;
      st.rcont[4 * n + i] =
          hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    sol.steps_.push_back(std::move(st));

    t = final_step ? t1 : (at_stop ? stops[next_stop] : t + hs);
    y = y_new;
    if (opt_.projection) {
      opt_.projection(t, y);
      rhs(t, y, k1);
    } else {
      k1 = k7;
    }
    h = h_next;
  }
  sol.final_state_ = y;
  return sol;
}

}  // namespace nullsim::ode
