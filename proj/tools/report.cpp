#include "report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "ptcure/errors.hpp"

namespace ptcure::cli {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

std::string fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

bool FitReport::any_degeneracy() const {
    if (!converged)
        return true;
    for (const GroupRow& g : groups)
        if (g.degenerate || !g.converged)
            return true;
    return false;
}

void write_report_json(std::ostream& out, const FitReport& report) {
    json groups = json::array();
    for (const GroupRow& g : report.groups) {
        groups.push_back({{"label", g.label},
                          {"n_events", g.n_events},
                          {"n_censored", g.n_censored},
                          {"theta", g.theta},
                          {"shape", g.shape},
                          {"scale", g.scale},
                          {"cure_fraction", g.cure_fraction},
                          {"theta_se", optional_to_json(g.theta_se)},
                          {"shape_se", optional_to_json(g.shape_se)},
                          {"scale_se", optional_to_json(g.scale_se)},
                          {"cure_fraction_se", optional_to_json(g.cure_fraction_se)},
                          {"converged", g.converged},
                          {"degenerate", g.degenerate}});
    }
    json j = {{"horizon_months", report.horizon_months},
              {"mode", report.mode},
              {"dropped_records", report.dropped_records},
              {"excluded_partial", report.excluded_partial},
              {"log_likelihood", report.log_likelihood},
              {"converged", report.converged},
              {"groups", groups}};
    if (report.partition) {
        j["partition"] = {{"cv_levels", report.partition->cv_levels},
                          {"bs_levels", report.partition->bs_levels}};
    } else {
        j["partition"] = nullptr;
    }
    out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const FitReport& report) {
    out << "group,n_events,n_censored,shape,scale,theta,cure_fraction,"
           "shape_se,scale_se,theta_se,cure_fraction_se,converged,degenerate\n";
    for (const GroupRow& g : report.groups) {
        out << g.label << ',' << g.n_events << ',' << g.n_censored << ',' << fixed(g.shape, 3)
            << ',' << fixed(g.scale, 3) << ',' << fixed(g.theta, 3) << ','
            << fixed(g.cure_fraction, 3) << ',';
        auto put = [&](const std::optional<double>& v) {
            if (v)
                out << fixed(*v, 3);
            out << ',';
        };
        put(g.shape_se);
        put(g.scale_se);
        put(g.theta_se);
        put(g.cure_fraction_se);
        out << (g.converged ? 1 : 0) << ',' << (g.degenerate ? 1 : 0) << '\n';
    }
}

FitReport read_report_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("fit report is not valid JSON: ") + e.what());
    }
    try {
        FitReport report;
        report.horizon_months = j.at("horizon_months").get<double>();
        report.mode = j.at("mode").get<std::string>();
        report.dropped_records = j.value("dropped_records", std::size_t{0});
        report.excluded_partial = j.value("excluded_partial", std::size_t{0});
        report.log_likelihood = j.value("log_likelihood", 0.0);
        report.converged = j.value("converged", false);
        if (j.contains("partition") && !j.at("partition").is_null()) {
            PartitionSpec spec;
            spec.cv_levels = j.at("partition").value("cv_levels", std::vector<int>{});
            spec.bs_levels = j.at("partition").value("bs_levels", std::vector<int>{});
            report.partition = spec;
        }
        for (const json& jg : j.at("groups")) {
            GroupRow g;
            g.label = jg.at("label").get<std::string>();
            g.n_events = jg.value("n_events", std::size_t{0});
            g.n_censored = jg.value("n_censored", std::size_t{0});
            g.theta = jg.at("theta").get<double>();
            g.shape = jg.at("shape").get<double>();
            g.scale = jg.at("scale").get<double>();
            g.cure_fraction = jg.value("cure_fraction", 0.0);
            g.theta_se = optional_from_json(jg, "theta_se");
            g.shape_se = optional_from_json(jg, "shape_se");
            g.scale_se = optional_from_json(jg, "scale_se");
            g.cure_fraction_se = optional_from_json(jg, "cure_fraction_se");
            g.converged = jg.value("converged", false);
            g.degenerate = jg.value("degenerate", false);
            report.groups.push_back(std::move(g));
        }
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("fit report is missing fields: ") + e.what());
    }
}

} // namespace ptcure::cli
