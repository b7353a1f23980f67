#include "ptcure/portfolio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ptcure/errors.hpp"

namespace ptcure {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& field) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("row " + std::to_string(row) + ": field '" + field +
                             "' is not a number: '" + s + "'",
                         row, field);
    return value;
}

int parse_flag(const std::string& s, std::size_t row, const std::string& field) {
    if (s == "0")
        return 0;
    if (s == "1")
        return 1;
    throw ParseError("row " + std::to_string(row) + ": field '" + field + "' must be 0 or 1, got '" +
                         s + "'",
                     row, field);
}

int parse_level(const std::string& s, std::size_t row, const std::string& field) {
    if (s.size() == 1 && s[0] >= '1' && s[0] <= '4')
        return s[0] - '0';
    throw ParseError("row " + std::to_string(row) + ": field '" + field +
                         "' must be a level in 1..4, got '" + s + "'",
                     row, field);
}

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<int> normalized_levels(std::vector<int> levels, const char* name) {
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int lv : levels)
        if (lv < 1 || lv > 4)
            throw SegmentationError(std::string(name) + " level " + std::to_string(lv) +
                                    " is outside 1..4");
    return levels;
}

} // namespace

Portfolio::Portfolio(std::vector<ContractRecord> records, double horizon_months)
    : records_(std::move(records)), horizon_months_(horizon_months) {
    if (!(horizon_months > 0.0) || !std::isfinite(horizon_months))
        throw std::invalid_argument("horizon must be positive and finite");

    std::unordered_set<std::string> seen;
    seen.reserve(records_.size());
    std::size_t row = 0;
    for (const ContractRecord& r : records_) {
        ++row;
        if (!seen.insert(r.contract_id).second)
            throw ParseError("row " + std::to_string(row) + ": duplicate contract_id '" +
                                 r.contract_id + "'",
                             row, "contract_id");
        if (!(r.time_months >= 0.0))
            throw ParseError("row " + std::to_string(row) + ": time_months must be non-negative",
                             row, "time_months");
        if (r.recovered && r.time_months > horizon_months_)
            throw ParseError("row " + std::to_string(row) +
                                 ": recovered at " + format_double(r.time_months) +
                                 " months, beyond the horizon of " + format_double(horizon_months_),
                             row, "time_months");
        if (!r.recovered && r.time_months != horizon_months_)
            throw ParseError("row " + std::to_string(row) +
                                 ": unrecovered rows must carry the censoring horizon " +
                                 format_double(horizon_months_) + " as their time",
                             row, "time_months");
        if (r.fx_bs < 1 || r.fx_bs > 4)
            throw ParseError("row " + std::to_string(row) + ": fx_bs outside 1..4", row, "fx_bs");
        if (r.fx_cv < 1 || r.fx_cv > 4)
            throw ParseError("row " + std::to_string(row) + ": fx_cv outside 1..4", row, "fx_cv");
    }
}

std::vector<Observation> Portfolio::observations() const {
    std::vector<Observation> obs;
    obs.reserve(records_.size());
    for (const ContractRecord& r : records_)
        obs.push_back({r.time_months, r.recovered});
    return obs;
}

LoadResult load_portfolio(std::istream& in, double horizon_months) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty input: missing header row");

    const std::vector<std::string> header = split_csv_line(line);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    static const char* required[] = {"contract_id", "time_months", "recovered", "fx_bs", "fx_cv"};
    for (const char* name : required)
        if (!column(name))
            throw ParseError(std::string("missing required column '") + name + "'", 0, name);

    const std::size_t c_id = *column("contract_id");
    const std::size_t c_time = *column("time_months");
    const std::size_t c_rec = *column("recovered");
    const std::size_t c_bs = *column("fx_bs");
    const std::size_t c_cv = *column("fx_cv");
    const std::optional<std::size_t> c_partial = column("partially_recovered");

    std::vector<ContractRecord> records;
    std::size_t excluded = 0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             row);
        if (c_partial && parse_flag(fields[*c_partial], row, "partially_recovered") == 1) {
            ++excluded; // partial recoveries never enter the portfolio
            continue;
        }
        ContractRecord r;
        r.contract_id = fields[c_id];
        r.time_months = parse_double(fields[c_time], row, "time_months");
        r.recovered = parse_flag(fields[c_rec], row, "recovered") == 1;
        r.fx_bs = parse_level(fields[c_bs], row, "fx_bs");
        r.fx_cv = parse_level(fields[c_cv], row, "fx_cv");
        records.push_back(std::move(r));
    }

    return LoadResult{Portfolio(std::move(records), horizon_months), excluded};
}

void write_portfolio(std::ostream& out, const Portfolio& p) {
    out << "contract_id,time_months,recovered,fx_bs,fx_cv\n";
    for (const ContractRecord& r : p.records()) {
        out << r.contract_id << ',' << format_double(r.time_months) << ',' << (r.recovered ? 1 : 0)
            << ',' << r.fx_bs << ',' << r.fx_cv << '\n';
    }
}

Segmentation segment(const Portfolio& p, const PartitionSpec& spec) {
    const std::vector<int> cv = normalized_levels(spec.cv_levels, "fx_cv");
    const std::vector<int> bs = normalized_levels(spec.bs_levels, "fx_bs");
    if (cv.empty() && bs.empty())
        throw SegmentationError("partition spec selects no levels");

    auto selected = [](const std::vector<int>& levels, int value) {
        return std::find(levels.begin(), levels.end(), value) != levels.end();
    };

    Segmentation seg;
    for (const ContractRecord& r : p.records()) {
        if ((!cv.empty() && !selected(cv, r.fx_cv)) || (!bs.empty() && !selected(bs, r.fx_bs))) {
            ++seg.dropped;
            continue;
        }
        std::string label;
        if (!cv.empty())
            label += "CV" + std::to_string(r.fx_cv);
        if (!bs.empty()) {
            if (!label.empty())
                label += 'x';
            label += "BS" + std::to_string(r.fx_bs);
        }
        seg.groups[label].push_back({r.time_months, r.recovered});
    }
    if (seg.groups.empty())
        throw SegmentationError("no record falls in the selected levels");
    return seg;
}

SummaryRow summarize(const std::string& label, std::span<const Observation> obs) {
    if (obs.empty())
        throw std::domain_error("summarize requires a non-empty group");

    SummaryRow row;
    row.label = label;
    row.n_total = obs.size();
    double recovered_time_sum = 0.0;
    for (const Observation& o : obs) {
        if (o.event) {
            ++row.n_recovered;
            recovered_time_sum += o.time;
        }
    }
    row.n_unrecovered = row.n_total - row.n_recovered;
    // Exact truncation of 100 * unrecovered/total at two decimals; integer
    // arithmetic so no binary-representation artifact can flip a digit.
    const auto basis_points =
        static_cast<long long>(row.n_unrecovered) * 10000LL / static_cast<long long>(row.n_total);
    row.pct_non_recovery = static_cast<double>(basis_points) / 100.0;
    if (row.n_recovered > 0)
        row.mean_recovery_time_months = recovered_time_sum / static_cast<double>(row.n_recovered);
    return row;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "group,n_total,n_recovered,n_unrecovered,pct_non_recovery,mean_recovery_time_months\n";
    for (const SummaryRow& r : rows) {
        std::ostringstream line;
        line << r.label << ',' << r.n_total << ',' << r.n_recovered << ',' << r.n_unrecovered << ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", r.pct_non_recovery);
        line << buf << ',';
        if (r.mean_recovery_time_months) {
            std::snprintf(buf, sizeof(buf), "%.2f", *r.mean_recovery_time_months);
            line << buf;
        }
        out << line.str() << '\n';
    }
}

} // namespace ptcure
