#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "ptcure/promotion_model.hpp"

namespace ptcure {

/// Right-continuous step function on [0, inf): 1 before the first
/// breakpoint, then the breakpoint's value from its time until the next one.
class StepFunction {
  public:
    StepFunction() = default;

    /// Breakpoints must have strictly increasing times and nonincreasing
    /// values within [0, 1].
    explicit StepFunction(std::vector<std::pair<double, double>> steps);

    double operator()(double t) const;
    const std::vector<std::pair<double, double>>& steps() const { return steps_; }

  private:
    std::vector<std::pair<double, double>> steps_;
};

/// Product-limit survival estimate. At tied times the events are processed
/// before the censorings (the censored units still count as at risk), the
/// standard convention. With censoring past the last event the curve
/// plateaus at its last value instead of reaching zero - the signature that
/// motivates a cure term.
StepFunction kaplan_meier(std::span<const Observation> obs);

/// max over the grid of |estimate(t) - S_model(t)|; a goodness-of-fit
/// diagnostic.
double sup_distance(const StepFunction& s, const ModelParams& model, std::span<const double> grid);

/// Two-column CSV (time_months, survival), with a leading (0, 1) row when
/// the curve has not dropped at zero.
void write_step_csv(std::ostream& out, const StepFunction& s);

} // namespace ptcure
