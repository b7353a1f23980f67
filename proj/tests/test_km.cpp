#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ptcure/kaplan_meier.hpp"
#include "ptcure/simulation.hpp"

using namespace ptcure;

TEST_SUITE_BEGIN("kaplan_meier");

TEST_CASE("step function validation and evaluation") {
    const StepFunction s(std::vector<std::pair<double, double>>{{1.0, 0.75}, {2.5, 0.5}});
    CHECK(s(0.0) == 1.0);
    CHECK(s(0.999) == 1.0);
    CHECK(s(1.0) == 0.75);
    CHECK(s(2.4) == 0.75);
    CHECK(s(2.5) == 0.5);
    CHECK(s(100.0) == 0.5);

    CHECK_THROWS_AS(StepFunction(std::vector<std::pair<double, double>>{{1.0, 0.5}, {1.0, 0.4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(StepFunction(std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 0.6}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(StepFunction(std::vector<std::pair<double, double>>{{1.0, 1.2}}),
                    std::invalid_argument);
}

TEST_CASE("product-limit worked examples") {
    SUBCASE("three events, no censoring") {
        const std::vector<Observation> obs = {{1.0, true}, {2.0, true}, {3.0, true}};
        const StepFunction s = kaplan_meier(obs);
        CHECK(s(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(s(2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(s(3.0) == 0.0);
    }
    SUBCASE("all censored stays at one") {
        const std::vector<Observation> obs = {{5.0, false}, {7.0, false}};
        const StepFunction s = kaplan_meier(obs);
        for (double t : {0.0, 5.0, 6.0, 100.0})
            CHECK(s(t) == 1.0);
    }
    SUBCASE("censoring between events empties the risk set") {
        const std::vector<Observation> obs = {{1.0, true}, {1.5, false}, {2.0, true}};
        const StepFunction s = kaplan_meier(obs);
        CHECK(s(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(s(1.7) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(s(2.0) == 0.0);
    }
    SUBCASE("ties: events before censorings at the same time") {
        const std::vector<Observation> obs = {{1.0, true}, {1.0, false}, {2.0, true}};
        const StepFunction s = kaplan_meier(obs);
        // The unit censored at 1.0 is still at risk for the event at 1.0.
        CHECK(s(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(s(2.0) == 0.0);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(kaplan_meier(std::vector<Observation>{}), std::domain_error);
    }
}

TEST_CASE("without censoring the estimate is one minus the empirical cdf") {
    const std::vector<double> times = {3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0};
    std::vector<Observation> obs;
    for (double t : times)
        obs.push_back({t, true});
    const StepFunction s = kaplan_meier(obs);
    for (double t : {0.5, 1.0, 2.5, 3.0, 5.0, 8.9, 9.0, 20.0}) {
        std::size_t beyond = 0;
        for (double x : times)
            beyond += x > t ? 1 : 0;
        CHECK(s(t) == doctest::Approx(static_cast<double>(beyond) / times.size()).epsilon(1e-12));
    }
}

TEST_CASE("censoring after the last event leaves a plateau") {
    const std::vector<Observation> obs = {
        {1.0, true}, {2.0, true}, {5.0, false}, {8.0, false}, {12.0, false}};
    const StepFunction s = kaplan_meier(obs);
    const double plateau = s(2.0);
    CHECK(plateau > 0.0);
    CHECK(s(100.0) == plateau);
}

TEST_CASE("sup distance") {
    const ModelParams model(0.871, WeibullParams(1.157, 18.762));

    SUBCASE("against the model's own curve sampled densely") {
        std::vector<std::pair<double, double>> steps;
        double prev = 1.0;
        for (int i = 1; i <= 4800; ++i) {
            const double t = 24.0 * i / 4800.0;
            const double v = std::min(prev, population_survival(t, model));
            steps.emplace_back(t, v);
            prev = v;
        }
        const StepFunction s(std::move(steps));
        std::vector<double> grid;
        for (int i = 0; i <= 480; ++i)
            grid.push_back(24.0 * i / 480.0);
        // Within one discretization step of the curve's total drop rate.
        CHECK(sup_distance(s, model, grid) < 0.001);
    }
    SUBCASE("well-specified simulation comes close, a wrong theta does not") {
        const SimulationSpec spec{model, 100000, 24.0, 271828};
        const auto obs = simulate_portfolio(spec).observations();
        const StepFunction km = kaplan_meier(obs);
        std::vector<double> grid;
        for (int i = 1; i <= 96; ++i)
            grid.push_back(24.0 * i / 96.0);
        CHECK(sup_distance(km, model, grid) < 0.01);

        const ModelParams wrong(2.0 * 0.871, WeibullParams(1.157, 18.762));
        CHECK(sup_distance(km, wrong, grid) > 0.05);
    }
}

TEST_CASE("step csv serialization") {
    const StepFunction s(std::vector<std::pair<double, double>>{{1.5, 0.5}});
    std::ostringstream out;
    write_step_csv(out, s);
    CHECK(out.str() == "time_months,survival\n0,1\n1.5,0.5\n");
}

TEST_SUITE_END();
