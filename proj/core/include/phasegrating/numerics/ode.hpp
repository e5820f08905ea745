#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace phasegrating::numerics {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Called after every accepted step with the new time and state.
using StepObserver = std::function<void(double t, std::span<const double> y)>;

struct OdeOptions {
  double rtol = 1e-10;
  // One entry per component, or a single entry broadcast to all; empty means rtol.
  std::vector<double> atol;
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = 0.0;      // 0 means unbounded
  std::size_t max_steps = 1'000'000;
  bool dense = true;  // keep the per-step interpolation data
};

// Continuous extension of an accepted Dormand-Prince run (fourth-order Hairer interpolant).
class DenseSolution {
 public:
  DenseSolution() = default;

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }
  double t_begin() const noexcept { return times_.front(); }
  double t_end() const noexcept { return times_.back(); }
  bool has_dense_output() const noexcept { return !coeffs_.empty() || steps() == 0; }

  double node_time(std::size_t i) const { return times_.at(i); }
  std::span<const double> node_state(std::size_t i) const;
  std::span<const double> final_state() const { return node_state(times_.size() - 1); }

  // Throws std::out_of_range outside [t_begin, t_end] and std::logic_error when dense output
  // was disabled.
  std::vector<double> evaluate(double t) const;
  void evaluate(double t, std::span<double> out) const;

 private:
  friend DenseSolution integrate_dopri5(const OdeRhs&, double, double, std::span<const double>,
                                        const OdeOptions&, const StepObserver&);

  std::size_t dim_ = 0;
  std::vector<double> times_;
  std::vector<double> states_;  // (steps + 1) * dim
  std::vector<double> coeffs_;  // steps * 5 * dim: rcont1..rcont5 per step
};

// Adaptive Dormand-Prince 5(4). t1 may be smaller than t0.
// Throws IntegrationError on step-size underflow, non-finite derivatives or max_steps.
DenseSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1, std::span<const double> y0,
                               const OdeOptions& options = {}, const StepObserver& observer = {});

}  // namespace phasegrating::numerics
