#include "ptcure/kaplan_meier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ptcure {

StepFunction::StepFunction(std::vector<std::pair<double, double>> steps)
    : steps_(std::move(steps)) {
    double prev_time = -1.0;
    double prev_value = 1.0;
    for (const auto& [time, value] : steps_) {
        if (!(time > prev_time))
            throw std::invalid_argument("step times must be strictly increasing");
        if (!(value >= 0.0) || !(value <= prev_value))
            throw std::invalid_argument("step values must be nonincreasing within [0, 1]");
        prev_time = time;
        prev_value = value;
    }
}

double StepFunction::operator()(double t) const {
    // Last breakpoint with time <= t; 1 before the first.
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double lhs, const auto& bp) { return lhs < bp.first; });
    if (it == steps_.begin())
        return 1.0;
    return std::prev(it)->second;
}

StepFunction kaplan_meier(std::span<const Observation> obs) {
    if (obs.empty())
        throw std::domain_error("kaplan_meier requires a non-empty dataset");

    std::vector<Observation> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Observation& a, const Observation& b) { return a.time < b.time; });

    std::vector<std::pair<double, double>> steps;
    double survival = 1.0;
    std::size_t at_risk = sorted.size();
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double t = sorted[i].time;
        std::size_t events = 0;
        std::size_t leaving = 0;
        while (i < sorted.size() && sorted[i].time == t) {
            events += sorted[i].event ? 1 : 0;
            ++leaving;
            ++i;
        }
        if (events > 0) {
            survival *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
            steps.emplace_back(t, survival);
        }
        at_risk -= leaving;
    }
    return StepFunction(std::move(steps));
}

double sup_distance(const StepFunction& s, const ModelParams& model,
                    std::span<const double> grid) {
    double sup = 0.0;
    for (double t : grid)
        sup = std::max(sup, std::abs(s(t) - population_survival(t, model)));
    return sup;
}

void write_step_csv(std::ostream& out, const StepFunction& s) {
    out << "time_months,survival\n";
    const auto& steps = s.steps();
    if (steps.empty() || steps.front().first > 0.0)
        out << "0,1\n";
    char buf[64];
    for (const auto& [time, value] : steps) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g", time, value);
        out << buf << '\n';
    }
}

} // namespace ptcure
