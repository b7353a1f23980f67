#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptcure/promotion_model.hpp"

namespace ptcure {

enum class OptimizerKind {
    quasi_newton, // BFGS on the analytic gradient (default)
    simplex,      // derivative-free Nelder-Mead fallback
};

struct FitOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-8; // on objective improvement
    int multistart_count = 5;
    OptimizerKind optimizer = OptimizerKind::quasi_newton;
};

/// Delta-method standard errors in natural parameter space.
struct StdErrors {
    std::array<double, 3> params{}; // theta, shape, scale
    double cure_fraction = 0.0;
};

struct FitResult {
    ModelParams params;
    double log_likelihood = 0.0;
    std::optional<StdErrors> std_errors; // absent when the Hessian is not positive definite
    double cure_fraction = 0.0;          // exp(-theta)
    bool converged = false;
    int iterations = 0;
    std::size_t n_events = 0;
    std::size_t n_censored = 0;
};

/// Estimate for one group's intensity inside a stratified fit. A degenerate
/// group (no events) has theta pinned at 0 and no standard error.
struct GroupEstimate {
    double theta = 0.0;
    std::optional<double> std_error;
    bool degenerate = false;
};

struct StratifiedFitResult {
    WeibullParams shared_weibull;
    std::map<std::string, GroupEstimate> per_group_theta;
    double log_likelihood = 0.0;
    std::optional<std::array<double, 2>> shared_std_errors; // shape, scale
    bool converged = false;
    int iterations = 0;
};

/// Moment-style starting point: theta from the censored fraction (floored at
/// 1/(2n) so fully-observed data still initializes), shape 1, scale the mean
/// event time. Throws UnidentifiableError when the data has no events.
ModelParams initial_params(std::span<const Observation> data);

/// Maximum-likelihood fit over the unconstrained (log theta, log shape,
/// log scale) space, best of multistart_count jittered restarts. All-censored
/// input throws UnidentifiableError; a single repeated event time cannot
/// identify the shape and comes back as converged = false rather than a
/// crash or garbage.
FitResult fit_mle(std::span<const Observation> data, const FitOptions& opts = {});

/// Joint fit of one shared Weibull baseline plus a separate theta per group,
/// 2 + |groups| free parameters, matching the usual segment-table layout
/// where shape and scale repeat down the column while theta varies. Groups
/// without events are pinned at theta = 0 and flagged degenerate.
StratifiedFitResult fit_stratified(const std::map<std::string, std::vector<Observation>>& groups,
                                   const FitOptions& opts = {});

/// Standard errors at a stationary point: central-difference Hessian of the
/// negative log-likelihood in log space (steps max(1e-5, 1e-5|x_j|)),
/// inverted and mapped back by the delta method. nullopt when the Hessian is
/// not positive definite; nothing is fabricated.
std::optional<StdErrors> standard_errors(const ModelParams& p, std::span<const Observation> data);

struct RiskRank {
    std::string label;
    double theta = 0.0;
    double cure_fraction = 0.0;
};

/// Groups ordered by ascending theta (least to most susceptible to
/// recovery), ties broken by label.
std::vector<RiskRank> risk_ranking(const std::map<std::string, double>& thetas);
std::vector<RiskRank> risk_ranking(const std::map<std::string, FitResult>& fits);

} // namespace ptcure
