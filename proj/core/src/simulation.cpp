#include "ptcure/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ptcure {

ContractDraw simulate_contract_detailed(Rng& rng, const ModelParams& p, double horizon_months) {
    if (!(horizon_months > 0.0))
        throw std::invalid_argument("horizon must be positive");

    ContractDraw draw;
    draw.cause_count = poisson_sample(rng, PoissonParam(p.theta()));
    if (draw.cause_count == 0) {
        draw.obs = {horizon_months, false}; // cured: censored at the horizon
        return draw;
    }
    double min_time = weibull_sample(rng, p.weibull());
    for (int i = 1; i < draw.cause_count; ++i)
        min_time = std::min(min_time, weibull_sample(rng, p.weibull()));
    draw.latent_min_time = min_time;
    if (min_time > horizon_months)
        draw.obs = {horizon_months, false};
    else
        draw.obs = {min_time, true};
    return draw;
}

Observation simulate_contract(Rng& rng, const ModelParams& p, double horizon_months) {
    return simulate_contract_detailed(rng, p, horizon_months).obs;
}

Portfolio simulate_portfolio(const SimulationSpec& spec) {
    if (spec.n_contracts < 1)
        throw std::invalid_argument("simulation needs at least one contract");
    if (!(spec.horizon_months > 0.0))
        throw std::invalid_argument("horizon must be positive");

    Rng rng(spec.seed);
    std::vector<ContractRecord> records;
    records.reserve(static_cast<std::size_t>(spec.n_contracts));
    char id[16];
    for (int i = 0; i < spec.n_contracts; ++i) {
        const Observation obs = simulate_contract(rng, spec.true_params, spec.horizon_months);
        std::snprintf(id, sizeof(id), "S%08d", i + 1);
        records.push_back({id, obs.time, obs.event, 1, 1});
    }
    return Portfolio(std::move(records), spec.horizon_months);
}

} // namespace ptcure
