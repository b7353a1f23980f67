#pragma once

#include <cstdint>
#include <optional>

#include "ptcure/portfolio.hpp"
#include "ptcure/promotion_model.hpp"
#include "ptcure/random.hpp"

namespace ptcure {

struct SimulationSpec {
    ModelParams true_params;
    int n_contracts = 0;
    double horizon_months = 24.0;
    std::uint64_t seed = 0;
};

/// Latent detail behind one simulated contract. cause_count == 0 means the
/// unit is cured; latent_min_time is unset in that case and may exceed the
/// horizon otherwise (an in-principle recovery the study window missed).
/// Real data never shows these fields; they exist for tests.
struct ContractDraw {
    Observation obs;
    int cause_count = 0;
    std::optional<double> latent_min_time;
};

/// One draw from the generative mechanism: a Poisson number of latent
/// causes, each with a Weibull time, the unit recovering at the earliest of
/// them. No causes, or an earliest time past the horizon, yields a censored
/// observation at the horizon.
ContractDraw simulate_contract_detailed(Rng& rng, const ModelParams& p, double horizon_months);

/// Observable part of simulate_contract_detailed.
Observation simulate_contract(Rng& rng, const ModelParams& p, double horizon_months);

/// n independent contracts with sequential ids; byte-for-byte reproducible
/// from the seed. Segment labels are all set to 1.
Portfolio simulate_portfolio(const SimulationSpec& spec);

} // namespace ptcure
