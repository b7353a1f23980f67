#include "ptcure/promotion_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptcure {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ModelParams::ModelParams(double theta, WeibullParams weibull)
    : theta_(theta), weibull_(weibull) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("theta must be non-negative and finite");
}

double cure_fraction(double theta) {
    if (!(theta >= 0.0))
        throw std::domain_error("theta must be non-negative");
    return std::exp(-theta);
}

double population_survival(double t, const ModelParams& p) {
    return std::exp(-p.theta() * weibull_cdf(t, p.weibull()));
}

double population_density(double t, const ModelParams& p) {
    return p.theta() * weibull_pdf(t, p.weibull()) * population_survival(t, p);
}

double population_hazard(double t, const ModelParams& p) {
    if (!(t > 0.0))
        throw std::domain_error("hazard requires t > 0");
    // Survival never reaches zero (it is bounded below by the cure fraction),
    // so the ratio form is safe.
    return population_density(t, p) / population_survival(t, p);
}

double log_likelihood(const ModelParams& p, std::span<const Observation> data) {
    if (data.empty())
        throw std::domain_error("log_likelihood requires a non-empty dataset");

    const double theta = p.theta();
    const double log_theta = theta > 0.0 ? std::log(theta) : -kInf;

    double ll = 0.0;
    for (const Observation& obs : data) {
        if (!(obs.time >= 0.0))
            throw std::domain_error("observation times must be non-negative");
        ll -= theta * weibull_cdf(obs.time, p.weibull());
        if (obs.event)
            ll += log_theta + weibull_log_pdf(obs.time, p.weibull());
    }
    return ll;
}

std::array<double, 3> log_likelihood_gradient(const ModelParams& p,
                                              std::span<const Observation> data) {
    if (data.empty())
        throw std::domain_error("log_likelihood_gradient requires a non-empty dataset");

    const double theta = p.theta();
    const double shape = p.weibull().shape();
    const double scale = p.weibull().scale();

    double d_theta = 0.0;
    double d_shape = 0.0;
    double d_scale = 0.0;
    std::size_t n_events = 0;

    for (const Observation& obs : data) {
        if (!(obs.time >= 0.0))
            throw std::domain_error("observation times must be non-negative");
        if (obs.event)
            ++n_events;
        if (obs.time == 0.0)
            continue; // F(0) = 0 and x^shape*log(x) -> 0: nothing to add

        const double x = obs.time / scale;
        const double lx = std::log(x);
        const double xs = std::pow(x, shape);       // x^shape
        const double tail = std::exp(-xs);          // 1 - F(t)

        d_theta -= 1.0 - tail;                      // -F(t)
        d_shape -= theta * tail * xs * lx;
        d_scale += theta * tail * shape * xs / scale;
        if (obs.event) {
            d_shape += 1.0 / shape + lx * (1.0 - xs);
            d_scale += shape * (xs - 1.0) / scale;
        }
    }
    if (n_events > 0)
        d_theta += static_cast<double>(n_events) / theta;

    return {d_theta, d_shape, d_scale};
}

} // namespace ptcure
