#pragma once

#include <array>
#include <span>

#include "ptcure/distributions.hpp"

namespace ptcure {

/// Parameters of the latent-cause recovery model. theta is the expected
/// number of latent causes racing to trigger recovery; the Weibull part is
/// the common law of each cause's latent time. A unit survives forever with
/// probability exp(-theta) (no causes at all), so the population survival
///
///   S(t) = exp(-theta F(t))
///
/// levels off at exp(-theta) instead of dropping to zero.
class ModelParams {
  public:
    ModelParams(double theta, WeibullParams weibull);

    double theta() const { return theta_; }
    const WeibullParams& weibull() const { return weibull_; }

  private:
    double theta_;
    WeibullParams weibull_;
};

/// One unit under observation: the recovery time when event is true, the
/// censoring time otherwise.
struct Observation {
    double time = 0.0; // months
    bool event = false; // true = recovered
};

/// P(never recovered) = exp(-theta).
double cure_fraction(double theta);

/// S(t) = exp(-theta F(t)); 1 at t = 0, exp(-theta) in the limit.
double population_survival(double t, const ModelParams& p);

/// f(t) = theta f_W(t) exp(-theta F(t)) = -dS/dt. Defective: it integrates
/// to 1 - exp(-theta), the mass that ever recovers.
double population_density(double t, const ModelParams& p);

/// f(t)/S(t) for t > 0; algebraically theta * f_W(t).
double population_hazard(double t, const ModelParams& p);

/// Censored log-likelihood
///
///   sum_i [ delta_i (log theta + log f_W(t_i)) - theta F(t_i) ]
///
/// evaluated observation-wise in log space. Returns -inf (never throws) when
/// an event sits where the density vanishes, e.g. an event at t = 0 with
/// shape > 1, or any event with theta = 0.
double log_likelihood(const ModelParams& p, std::span<const Observation> data);

/// d/d(theta, shape, scale) of log_likelihood, in that order. Defined at
/// points where the likelihood is finite; requires theta > 0 when events are
/// present.
std::array<double, 3> log_likelihood_gradient(const ModelParams& p,
                                              std::span<const Observation> data);

} // namespace ptcure
