// Fit report: the dual-format artifact the fit command writes and the
// table/curve commands read back. JSON carries full precision for machines;
// the CSV rounds to presentation precision for humans.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptcure/portfolio.hpp"

namespace ptcure::cli {

struct GroupRow {
    std::string label;
    std::size_t n_events = 0;
    std::size_t n_censored = 0;
    double theta = 0.0;
    double shape = 0.0;
    double scale = 0.0;
    double cure_fraction = 0.0;
    std::optional<double> theta_se;
    std::optional<double> shape_se;
    std::optional<double> scale_se;
    std::optional<double> cure_fraction_se;
    bool converged = false;
    bool degenerate = false;
};

struct FitReport {
    double horizon_months = 24.0;
    std::string mode; // "pooled" or "stratified"
    std::optional<PartitionSpec> partition;
    std::size_t dropped_records = 0;
    std::size_t excluded_partial = 0;
    double log_likelihood = 0.0;
    bool converged = false;
    std::vector<GroupRow> groups;

    bool any_degeneracy() const;
};

void write_report_json(std::ostream& out, const FitReport& report);
void write_report_csv(std::ostream& out, const FitReport& report);
FitReport read_report_json(std::istream& in);

} // namespace ptcure::cli
