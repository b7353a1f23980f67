#pragma once

#include "ptcure/random.hpp"

namespace ptcure {

/// Weibull lifetime parameters in the shape/scale form:
///
///   F(t) = 1 - exp(-(t/scale)^shape)
///
/// Times and the scale are in months. Sources that quote a rate parameter
/// instead use scale = 1/rate.
class WeibullParams {
  public:
    WeibullParams(double shape, double scale);

    double shape() const { return shape_; }
    double scale() const { return scale_; }

  private:
    double shape_;
    double scale_;
};

/// Poisson intensity: the expected count of latent causes. Zero is allowed
/// and degenerates to a point mass at zero causes.
class PoissonParam {
  public:
    explicit PoissonParam(double intensity);

    double intensity() const { return intensity_; }

  private:
    double intensity_;
};

/// Density f(t) = (shape/scale) (t/scale)^{shape-1} exp(-(t/scale)^shape).
/// At t = 0 the density is 0 for shape > 1, 1/scale for shape = 1, and
/// diverges for shape < 1.
double weibull_pdf(double t, const WeibullParams& p);

/// log f(t); -inf where the density vanishes.
double weibull_log_pdf(double t, const WeibullParams& p);

/// F(t) = 1 - exp(-(t/scale)^shape), evaluated via expm1.
double weibull_cdf(double t, const WeibullParams& p);

/// Inverse of the cdf on u in [0, 1): scale * (-ln(1-u))^{1/shape}.
double weibull_quantile(double u, const WeibullParams& p);

/// Inverse-transform draw: weibull_quantile(uniform01(rng)).
double weibull_sample(Rng& rng, const WeibullParams& p);

/// P(M = m) = theta^m exp(-theta)/m!, evaluated in log space so large m
/// cannot overflow the m! term.
double poisson_pmf(int m, const PoissonParam& p);

/// Exact Poisson draw: sequential inversion for intensity < 30, rejection
/// from a heavy-tailed envelope around the mode above that.
int poisson_sample(Rng& rng, const PoissonParam& p);

} // namespace ptcure
