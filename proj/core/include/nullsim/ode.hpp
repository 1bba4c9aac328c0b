#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace nullsim::ode {

using State = std::vector<double>;
/// dy/dt = rhs(t, y); writes into dydt (already sized).
using Rhs = std::function<void(double t, const State& y, State& dydt)>;
/// Optional hook applied to each accepted step endpoint (e.g. constraint projection).
using Projection = std::function<void(double t, State& y)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  ///< 0 selects automatically
  double max_step = 0.0;      ///< 0 means unbounded
  std::size_t max_steps = 200000;
  /// When set, takes uniform steps of this size with no error control.
  std::optional<double> fixed_step;
  Projection projection;
  /// Times the integrator must land on exactly (never stepping across one).
  std::vector<double> stops;
};

/// Continuous solution of one Dormand–Prince 5(4) run with its native
/// fourth-order dense output. Integration may run backwards (t_end < t_begin).
class DenseSolution {
 public:
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t dimension() const { return dim_; }
  std::size_t steps() const { return steps_.size(); }
  std::size_t rejected_steps() const { return rejected_; }

  State operator()(double t) const;
  void evaluate(double t, State& out) const;
  bool covers(double t, double slack = 0.0) const;

 private:
  friend class DormandPrince;

  struct Step {
    double t0;
    double h;
    std::vector<double> rcont;  ///< 5·dim interpolation coefficients
  };

  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  std::size_t dim_ = 0;
  std::size_t rejected_ = 0;
  std::vector<Step> steps_;
  State final_state_;
};

class DormandPrince {
 public:
  explicit DormandPrince(Options options = {}) : opt_(std::move(options)) {}

  /// Integrates from (t0, y0) to t1. Throws GeometryError(IntegratorFailure)
  /// on step-size underflow or when the step budget is exhausted.
  DenseSolution solve(const Rhs& rhs, double t0, const State& y0, double t1) const;

  const Options& options() const { return opt_; }

 private:
  Options opt_;
};

}  // namespace nullsim::ode
