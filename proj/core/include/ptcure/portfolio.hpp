#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptcure/promotion_model.hpp"

namespace ptcure {

/// One defaulted contract. fx_bs is the Behavior Score range and fx_cv the
/// contract amount range, both categorical with levels 1..4.
struct ContractRecord {
    std::string contract_id;
    double time_months = 0.0;
    bool recovered = false;
    int fx_bs = 1;
    int fx_cv = 1;
};

/// Validated collection of contracts under administrative censoring at a
/// common horizon: ids are unique, recovery times lie in [0, horizon], and
/// unrecovered contracts carry the horizon as their time. Immutable after
/// construction, so readers may share it freely.
class Portfolio {
  public:
    explicit Portfolio(std::vector<ContractRecord> records, double horizon_months = 24.0);

    const std::vector<ContractRecord>& records() const { return records_; }
    double horizon_months() const { return horizon_months_; }

    /// The (time, event) view the model layer consumes.
    std::vector<Observation> observations() const;

  private:
    std::vector<ContractRecord> records_;
    double horizon_months_;
};

struct LoadResult {
    Portfolio portfolio;
    std::size_t excluded_partial = 0; // partially recovered rows dropped at ingest
};

/// Reads the portfolio CSV: header row, columns contract_id, time_months,
/// recovered (0/1), fx_bs (1-4), fx_cv (1-4), optional partially_recovered
/// (0/1). Partially recovered rows never enter the portfolio; the count of
/// exclusions is reported. Malformed input throws ParseError naming the row
/// and field.
LoadResult load_portfolio(std::istream& in, double horizon_months = 24.0);

/// Writes the same CSV format; times round-trip exactly.
void write_portfolio(std::ostream& out, const Portfolio& p);

/// Which covariate levels form the groups. An empty level list means the
/// covariate is not used; at least one list must be non-empty.
struct PartitionSpec {
    std::vector<int> cv_levels;
    std::vector<int> bs_levels;
};

struct Segmentation {
    std::map<std::string, std::vector<Observation>> groups;
    std::size_t dropped = 0; // records outside the selected levels
};

/// Splits the portfolio into disjoint groups labelled "CV1", "BS2",
/// "CV1xBS2", ... Records outside the selected levels are dropped and
/// counted. Throws SegmentationError when the spec selects nothing or no
/// record matches.
Segmentation segment(const Portfolio& p, const PartitionSpec& spec);

struct SummaryRow {
    std::string label;
    std::size_t n_total = 0;
    std::size_t n_recovered = 0;
    std::size_t n_unrecovered = 0;
    double pct_non_recovery = 0.0; // truncated (not rounded) at 2 decimals
    std::optional<double> mean_recovery_time_months; // absent when nothing recovered
};

/// Counts and rates for one group. The non-recovery percentage is truncated
/// at two decimals in exact integer arithmetic, the convention recovery
/// reports use.
SummaryRow summarize(const std::string& label, std::span<const Observation> obs);

/// Summary CSV with columns group, n_total, n_recovered, n_unrecovered,
/// pct_non_recovery, mean_recovery_time_months.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

} // namespace ptcure
