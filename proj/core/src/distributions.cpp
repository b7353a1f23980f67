#include "ptcure/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ptcure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t) {
    if (!(t >= 0.0))
        throw std::domain_error("time must be non-negative");
}

} // namespace

WeibullParams::WeibullParams(double shape, double scale) : shape_(shape), scale_(scale) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::invalid_argument("Weibull shape must be positive and finite");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("Weibull scale must be positive and finite");
}

PoissonParam::PoissonParam(double intensity) : intensity_(intensity) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw std::invalid_argument("Poisson intensity must be non-negative and finite");
}

double weibull_pdf(double t, const WeibullParams& p) {
    require_time(t);
    const double x = t / p.scale();
    // pow(0,0) = 1 makes the shape = 1 origin value 1/scale, as it should be.
    return (p.shape() / p.scale()) * std::pow(x, p.shape() - 1.0) * std::exp(-std::pow(x, p.shape()));
}

double weibull_log_pdf(double t, const WeibullParams& p) {
    require_time(t);
    if (t == 0.0) {
        if (p.shape() > 1.0)
            return -kInf;
        if (p.shape() == 1.0)
            return -std::log(p.scale());
        return kInf; // density diverges at the origin for shape < 1
    }
    const double lx = std::log(t / p.scale());
    return std::log(p.shape() / p.scale()) + (p.shape() - 1.0) * lx - std::pow(t / p.scale(), p.shape());
}

double weibull_cdf(double t, const WeibullParams& p) {
    require_time(t);
    return -std::expm1(-std::pow(t / p.scale(), p.shape()));
}

double weibull_quantile(double u, const WeibullParams& p) {
    if (!(u >= 0.0) || !(u < 1.0))
        throw std::domain_error("quantile argument must lie in [0, 1)");
    return p.scale() * std::pow(-std::log1p(-u), 1.0 / p.shape());
}

double weibull_sample(Rng& rng, const WeibullParams& p) {
    return weibull_quantile(uniform01(rng), p);
}

double poisson_pmf(int m, const PoissonParam& p) {
    if (m < 0)
        throw std::domain_error("Poisson count must be non-negative");
    const double theta = p.intensity();
    if (theta == 0.0)
        return m == 0 ? 1.0 : 0.0;
    return std::exp(m * std::log(theta) - theta - std::lgamma(m + 1.0));
}

int poisson_sample(Rng& rng, const PoissonParam& p) {
    const double theta = p.intensity();
    if (theta == 0.0)
        return 0;

    if (theta < 30.0) {
        // Sequential inversion: walk the cdf until it passes the uniform draw.
        const double u = uniform01(rng);
        double prob = std::exp(-theta);
        double cum = prob;
        int m = 0;
        while (u > cum) {
            ++m;
            prob *= theta / m;
            cum += prob;
            if (prob == 0.0)
                break; // cdf numerically exhausted
        }
        return m;
    }

    // Rejection around the mode with a Cauchy envelope scaled to the normal
    // approximation's width (Numerical Recipes' poidev construction). Exact
    // for any intensity; used only above the inversion cutoff.
    const double sq = std::sqrt(2.0 * theta);
    const double logt = std::log(theta);
    const double g = theta * logt - std::lgamma(theta + 1.0);
    for (;;) {
        double y;
        double em;
        do {
            y = std::tan(std::numbers::pi * uniform01(rng));
            em = sq * y + theta;
        } while (em < 0.0);
        em = std::floor(em);
        const double accept = 0.9 * (1.0 + y * y) * std::exp(em * logt - std::lgamma(em + 1.0) - g);
        if (uniform01(rng) <= accept)
            return static_cast<int>(em);
    }
}

} // namespace ptcure
