#include "ptcure/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>

#include "ptcure/errors.hpp"
#include "ptcure/numerics.hpp"
#include "ptcure/random.hpp"

namespace ptcure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kJitterSeed = 0xA24BAED4963EE407ULL;

void validate_options(const FitOptions& opts) {
    if (opts.max_iterations <= 0 || opts.multistart_count <= 0 || !(opts.relative_tolerance > 0.0))
        throw std::invalid_argument("fit options must be positive");
}

struct Counts {
    std::size_t events = 0;
    std::size_t censored = 0;
};

Counts count_events(std::span<const Observation> data) {
    Counts c;
    for (const Observation& o : data) {
        if (!(o.time >= 0.0))
            throw std::domain_error("observation times must be non-negative");
        if (o.event)
            ++c.events;
        else
            ++c.censored;
    }
    return c;
}

std::size_t distinct_positive_event_times(std::span<const Observation> data) {
    std::set<double> times;
    for (const Observation& o : data)
        if (o.event && o.time > 0.0)
            times.insert(o.time);
    return times.size();
}

bool params_ok(double theta, double shape, double scale) {
    return std::isfinite(theta) && theta > 0.0 && std::isfinite(shape) && shape > 0.0 &&
           std::isfinite(scale) && scale > 0.0;
}

// Negative log-likelihood over v = (log theta, log shape, log scale).
double nll_logspace(std::span<const double> v, std::span<const Observation> data) {
    const double theta = std::exp(v[0]);
    const double shape = std::exp(v[1]);
    const double scale = std::exp(v[2]);
    if (!params_ok(theta, shape, scale))
        return kInf;
    const double ll = log_likelihood(ModelParams(theta, WeibullParams(shape, scale)), data);
    return std::isfinite(ll) ? -ll : kInf;
}

std::vector<double> nll_logspace_gradient(std::span<const double> v,
                                          std::span<const Observation> data) {
    const double theta = std::exp(v[0]);
    const double shape = std::exp(v[1]);
    const double scale = std::exp(v[2]);
    if (!params_ok(theta, shape, scale))
        return {0.0, 0.0, 0.0};
    const auto g = log_likelihood_gradient(ModelParams(theta, WeibullParams(shape, scale)), data);
    // Chain rule through x = exp(v), negated for minimization.
    return {-g[0] * theta, -g[1] * shape, -g[2] * scale};
}

// Deterministic per-restart stream: restart k always jitters the same way no
// matter how restarts are scheduled.
std::vector<double> jittered_start(const std::vector<double>& v0, int restart) {
    if (restart == 0)
        return v0;
    Rng rng(kJitterSeed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart)));
    std::vector<double> v = v0;
    for (double& c : v)
        c += 0.6 * uniform01(rng) - 0.3; // +-30% in log space
    return v;
}

MinimizeResult run_one(const Objective& f, const GradientFn& g, std::vector<double> start,
                       const FitOptions& opts) {
    MinimizeOptions mo;
    mo.max_iterations = opts.max_iterations;
    mo.relative_tolerance = opts.relative_tolerance;
    if (opts.optimizer == OptimizerKind::quasi_newton)
        return minimize_bfgs(f, g, std::move(start), mo);
    return minimize_nelder_mead(f, std::move(start), mo);
}

MinimizeResult multistart_minimize(const Objective& f, const GradientFn& g,
                                   const std::vector<double>& v0, const FitOptions& opts) {
    MinimizeResult best;
    best.value = kInf;
    for (int k = 0; k < opts.multistart_count; ++k) {
        MinimizeResult r = run_one(f, g, jittered_start(v0, k), opts);
        if (k == 0 || r.value < best.value)
            best = std::move(r);
    }
    if (opts.optimizer == OptimizerKind::quasi_newton && std::isfinite(best.value)) {
        // Polish the winner at a much tighter gradient target. The stopping
        // tolerances alone leave the iterate a visible distance from the
        // optimum; this drives it to the line-search resolution floor.
        MinimizeOptions mo;
        mo.max_iterations = 200;
        mo.relative_tolerance = 1e-14;
        mo.gradient_tolerance = 1e-9;
        MinimizeResult refined = minimize_bfgs(f, g, best.x, mo);
        if (refined.value <= best.value) {
            refined.iterations += best.iterations;
            best = std::move(refined);
        }
    }
    return best;
}

double gradient_norm(std::span<const double> g) {
    double s = 0.0;
    for (double v : g)
        s += v * v;
    return std::sqrt(s);
}

bool gradient_small(std::span<const double> g, double ll) {
    return gradient_norm(g) < 1e-5 * (1.0 + std::abs(ll));
}

std::optional<StdErrors> errors_from_logspace(const Objective& nll, std::span<const double> v,
                                              double theta, double shape, double scale) {
    const Matrix hess = numeric_hessian(nll, v);
    const auto inv = invert_spd(hess);
    if (!inv)
        return std::nullopt;
    std::array<double, 3> se_v{};
    for (std::size_t j = 0; j < 3; ++j) {
        const double var = (*inv)(j, j);
        if (!(var >= 0.0) || !std::isfinite(var))
            return std::nullopt;
        se_v[j] = std::sqrt(var);
    }
    StdErrors se;
    se.params = {theta * se_v[0], shape * se_v[1], scale * se_v[2]};
    se.cure_fraction = std::exp(-theta) * se.params[0];
    return se;
}

} // namespace

ModelParams initial_params(std::span<const Observation> data) {
    if (data.empty())
        throw std::domain_error("initial_params requires a non-empty dataset");
    const Counts c = count_events(data);
    if (c.events == 0)
        throw UnidentifiableError("cannot initialize: dataset has no recovery events");

    const double n = static_cast<double>(data.size());
    const double censored_fraction = static_cast<double>(c.censored) / n;
    const double theta0 = -std::log(std::max(censored_fraction, 1.0 / (2.0 * n)));

    double event_sum = 0.0;
    for (const Observation& o : data)
        if (o.event)
            event_sum += o.time;
    const double scale0 = event_sum / static_cast<double>(c.events);
    if (!(scale0 > 0.0))
        throw UnidentifiableError("cannot initialize: all event times are zero");

    return ModelParams(theta0, WeibullParams(1.0, scale0));
}

FitResult fit_mle(std::span<const Observation> data, const FitOptions& opts) {
    validate_options(opts);
    if (data.empty())
        throw std::domain_error("fit_mle requires a non-empty dataset");
    const Counts counts = count_events(data);
    if (counts.events == 0)
        throw UnidentifiableError(
            "all observations are censored: theta is not identifiable (its MLE degenerates to 0)");

    const ModelParams init = initial_params(data);

    auto make_result = [&](const ModelParams& params, double ll, bool converged, int iterations,
                           std::optional<StdErrors> se) {
        FitResult r{params, ll, std::move(se), cure_fraction(params.theta()), converged, iterations,
                    counts.events, counts.censored};
        return r;
    };

    if (distinct_positive_event_times(data) < 2) {
        // A single repeated event time carries no information about the
        // Weibull shape; report a convergence failure instead of letting the
        // optimizer chase a ridge.
        return make_result(init, log_likelihood(init, data), false, 0, std::nullopt);
    }

    const Objective f = [&data](std::span<const double> v) { return nll_logspace(v, data); };
    const GradientFn g = [&data](std::span<const double> v) {
        return nll_logspace_gradient(v, data);
    };

    const std::vector<double> v0 = {std::log(init.theta()), std::log(init.weibull().shape()),
                                    std::log(init.weibull().scale())};
    const MinimizeResult best = multistart_minimize(f, g, v0, opts);

    const double theta = std::exp(best.x[0]);
    const double shape = std::exp(best.x[1]);
    const double scale = std::exp(best.x[2]);
    if (!params_ok(theta, shape, scale))
        return make_result(init, log_likelihood(init, data), false, best.iterations, std::nullopt);

    const ModelParams fitted(theta, WeibullParams(shape, scale));
    const double ll = log_likelihood(fitted, data);

    // Convergence is first-order optimality at the returned point, checked in
    // both the natural and the log space; the simplex path has no gradient of
    // its own, so the optimizer's verdict alone would not do.
    const auto natural_grad = log_likelihood_gradient(fitted, data);
    const bool converged = gradient_small(natural_grad, ll) &&
                           gradient_small(nll_logspace_gradient(best.x, data), ll);

    return make_result(fitted, ll, converged, best.iterations,
                       errors_from_logspace(f, best.x, theta, shape, scale));
}

StratifiedFitResult fit_stratified(const std::map<std::string, std::vector<Observation>>& groups,
                                   const FitOptions& opts) {
    validate_options(opts);
    if (groups.size() < 2)
        throw std::invalid_argument("fit_stratified requires at least two groups");

    std::vector<std::string> active;     // groups with events, in map order
    std::vector<std::string> degenerate; // all-censored groups, theta pinned at 0
    std::vector<Observation> pooled;
    for (const auto& [label, obs] : groups) {
        if (obs.empty())
            throw std::invalid_argument("group '" + label + "' is empty");
        const Counts c = count_events(obs);
        (c.events > 0 ? active : degenerate).push_back(label);
        pooled.insert(pooled.end(), obs.begin(), obs.end());
    }
    if (active.empty())
        throw UnidentifiableError("every group is fully censored: nothing identifies the model");

    // v = (log shape, log scale, log theta_1 .. log theta_A)
    const std::size_t dim = 2 + active.size();
    const ModelParams pooled_init = initial_params(pooled);

    std::vector<double> v0(dim);
    v0[0] = std::log(pooled_init.weibull().shape());
    v0[1] = std::log(pooled_init.weibull().scale());
    for (std::size_t a = 0; a < active.size(); ++a) {
        const auto& obs = groups.at(active[a]);
        const Counts c = count_events(obs);
        const double n = static_cast<double>(obs.size());
        const double cf = static_cast<double>(c.censored) / n;
        v0[2 + a] = std::log(-std::log(std::max(cf, 1.0 / (2.0 * n))));
    }

    const Objective f = [&](std::span<const double> v) {
        const double shape = std::exp(v[0]);
        const double scale = std::exp(v[1]);
        double total = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double theta = std::exp(v[2 + a]);
            if (!params_ok(theta, shape, scale))
                return kInf;
            const double ll =
                log_likelihood(ModelParams(theta, WeibullParams(shape, scale)), groups.at(active[a]));
            if (!std::isfinite(ll))
                return kInf;
            total -= ll;
        }
        return total;
    };
    const GradientFn g = [&](std::span<const double> v) {
        std::vector<double> out(v.size(), 0.0);
        const double shape = std::exp(v[0]);
        const double scale = std::exp(v[1]);
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double theta = std::exp(v[2 + a]);
            if (!params_ok(theta, shape, scale))
                return out;
            const auto gg = log_likelihood_gradient(ModelParams(theta, WeibullParams(shape, scale)),
                                                    groups.at(active[a]));
            out[0] -= gg[1] * shape;
            out[1] -= gg[2] * scale;
            out[2 + a] -= gg[0] * theta;
        }
        return out;
    };

    const MinimizeResult best = multistart_minimize(f, g, v0, opts);

    const double shape = std::exp(best.x[0]);
    const double scale = std::exp(best.x[1]);

    StratifiedFitResult result{WeibullParams(1.0, 1.0), {}, 0.0, std::nullopt, false,
                               best.iterations};
    if (!std::isfinite(shape) || !std::isfinite(scale) || shape <= 0.0 || scale <= 0.0) {
        result.shared_weibull = pooled_init.weibull();
        for (const auto& label : active)
            result.per_group_theta[label] = GroupEstimate{pooled_init.theta(), std::nullopt, false};
        for (const auto& label : degenerate)
            result.per_group_theta[label] = GroupEstimate{0.0, std::nullopt, true};
        result.log_likelihood = -f(std::span<const double>(v0));
        return result;
    }

    result.shared_weibull = WeibullParams(shape, scale);
    result.log_likelihood = -best.value;
    result.converged = gradient_small(g(best.x), result.log_likelihood);

    // Per-group standard errors from the joint Hessian.
    std::optional<Matrix> cov;
    if (const auto inv = invert_spd(numeric_hessian(f, best.x)))
        cov = *inv;
    if (cov) {
        const double var_shape = (*cov)(0, 0);
        const double var_scale = (*cov)(1, 1);
        if (var_shape >= 0.0 && var_scale >= 0.0)
            result.shared_std_errors = {{shape * std::sqrt(var_shape), scale * std::sqrt(var_scale)}};
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
        const double theta = std::exp(best.x[2 + a]);
        GroupEstimate est{theta, std::nullopt, false};
        if (cov) {
            const double var = (*cov)(2 + a, 2 + a);
            if (var >= 0.0 && std::isfinite(var))
                est.std_error = theta * std::sqrt(var);
        }
        result.per_group_theta[active[a]] = est;
    }
    for (const auto& label : degenerate)
        result.per_group_theta[label] = GroupEstimate{0.0, std::nullopt, true};

    return result;
}

std::optional<StdErrors> standard_errors(const ModelParams& p, std::span<const Observation> data) {
    if (data.empty())
        throw std::domain_error("standard_errors requires a non-empty dataset");
    const Objective f = [&data](std::span<const double> v) { return nll_logspace(v, data); };
    const std::vector<double> v = {std::log(p.theta()), std::log(p.weibull().shape()),
                                   std::log(p.weibull().scale())};
    return errors_from_logspace(f, v, p.theta(), p.weibull().shape(), p.weibull().scale());
}

std::vector<RiskRank> risk_ranking(const std::map<std::string, double>& thetas) {
    std::vector<RiskRank> ranks;
    ranks.reserve(thetas.size());
    for (const auto& [label, theta] : thetas)
        ranks.push_back({label, theta, cure_fraction(theta)});
    // Map order is already lexicographic, so a stable sort on theta keeps the
    // tie rule for free.
    std::stable_sort(ranks.begin(), ranks.end(),
                     [](const RiskRank& a, const RiskRank& b) { return a.theta < b.theta; });
    return ranks;
}

std::vector<RiskRank> risk_ranking(const std::map<std::string, FitResult>& fits) {
    std::map<std::string, double> thetas;
    for (const auto& [label, fit] : fits)
        thetas[label] = fit.params.theta();
    return risk_ranking(thetas);
}

} // namespace ptcure
