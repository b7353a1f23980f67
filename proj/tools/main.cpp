// ptcure: simulate, fit and report on non-performing-loan recovery with the
// Poisson-Weibull latent competing risks model.
//
// Exit codes are a stable scripting contract: 0 success, 1 input error,
// 2 statistical degeneracy (unidentifiable data, non-convergence, or a
// degenerate group).
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptcure/ptcure.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace {

using namespace ptcure;
using cli::CurveData;
using cli::FitReport;
using cli::GroupRow;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDegenerate = 2;

struct GroupParams {
    std::string label;
    double theta = 0.0;
    double shape = 1.0;
    double scale = 1.0;
};

// ----- small IO helpers ------------------------------------------------------

LoadResult load_csv(const std::string& path, double horizon) {
    if (path == "-")
        return load_portfolio(std::cin, horizon);
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open input file '" + path + "'");
    return load_portfolio(in, horizon);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open output file '" + path + "'");
    out << text;
}

std::string fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// ----- shared flag blocks ----------------------------------------------------

struct PartitionFlags {
    std::vector<int> cv_levels;
    std::vector<int> bs_levels;

    bool any() const { return !cv_levels.empty() || !bs_levels.empty(); }
    PartitionSpec spec() const { return {cv_levels, bs_levels}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--cv-levels", cv_levels,
                        "Contract amount range levels to keep (e.g. 1,2)")
            ->delimiter(',');
        cmd->add_option("--bs-levels", bs_levels, "Behavior Score range levels to keep")
            ->delimiter(',');
    }
};

struct ParamsSourceFlags {
    std::string report_path;
    std::vector<std::string> literal_groups;
    double theta = -1.0;
    double shape = 0.0;
    double scale = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--params", report_path, "Fit report JSON produced by 'fit'");
        cmd->add_option("--group", literal_groups,
                        "Literal group parameters LABEL=theta,shape,scale (repeatable)");
        cmd->add_option("--theta", theta, "Single-group intensity theta");
        cmd->add_option("--shape", shape, "Single-group Weibull shape");
        cmd->add_option("--scale", scale, "Single-group Weibull scale (months)");
    }

    // Returns the groups plus the partition embedded in the report, if any.
    std::pair<std::vector<GroupParams>, std::optional<PartitionSpec>> resolve() const {
        std::vector<GroupParams> groups;
        std::optional<PartitionSpec> partition;
        if (!report_path.empty()) {
            std::ifstream in(report_path);
            if (!in)
                throw ParseError("cannot open fit report '" + report_path + "'");
            const FitReport report = cli::read_report_json(in);
            for (const GroupRow& g : report.groups) {
                if (g.degenerate)
                    continue; // theta pinned at 0 carries no usable curve parameters
                groups.push_back({g.label, g.theta, g.shape, g.scale});
            }
            partition = report.partition;
        }
        for (const std::string& spec : literal_groups) {
            GroupParams g;
            const auto eq = spec.find('=');
            char trail = 0;
            if (eq == std::string::npos ||
                std::sscanf(spec.c_str() + eq + 1, "%lf,%lf,%lf%c", &g.theta, &g.shape, &g.scale,
                            &trail) != 3)
                throw ParseError("bad --group spec '" + spec + "', expected LABEL=theta,shape,scale");
            g.label = spec.substr(0, eq);
            groups.push_back(g);
        }
        if (theta >= 0.0) {
            if (!(shape > 0.0) || !(scale > 0.0))
                throw ParseError("--theta needs --shape and --scale as well");
            groups.push_back({"ALL", theta, shape, scale});
        }
        if (groups.empty())
            throw ParseError("no parameters given: use --params, --group or --theta/--shape/--scale");
        for (const GroupParams& g : groups)
            ModelParams(g.theta, WeibullParams(g.shape, g.scale)); // validate early
        return {groups, partition};
    }
};

// ----- fit -------------------------------------------------------------------

struct FitCmd {
    std::string input;
    std::string output;
    double horizon = 24.0;
    PartitionFlags partition;
    int multistarts = 5;
    int max_iterations = 500;
    double tolerance = 1e-8;
    std::string optimizer = "bfgs";

    int run() const {
        FitOptions opts;
        opts.multistart_count = multistarts;
        opts.max_iterations = max_iterations;
        opts.relative_tolerance = tolerance;
        if (optimizer == "simplex")
            opts.optimizer = OptimizerKind::simplex;
        else if (optimizer != "bfgs")
            throw ParseError("unknown optimizer '" + optimizer + "' (bfgs or simplex)");

        const LoadResult loaded = load_csv(input, horizon);

        FitReport report;
        report.horizon_months = horizon;
        report.excluded_partial = loaded.excluded_partial;

        std::map<std::string, std::vector<Observation>> groups;
        if (partition.any()) {
            const Segmentation seg = segment(loaded.portfolio, partition.spec());
            groups = seg.groups;
            report.partition = partition.spec();
            report.dropped_records = seg.dropped;
        } else {
            groups["ALL"] = loaded.portfolio.observations();
        }

        auto count = [](const std::vector<Observation>& obs) {
            std::pair<std::size_t, std::size_t> c{0, 0};
            for (const Observation& o : obs)
                (o.event ? c.first : c.second)++;
            return c;
        };

        if (groups.size() == 1) {
            report.mode = "pooled";
            const auto& [label, obs] = *groups.begin();
            const FitResult fit = fit_mle(obs, opts);
            report.log_likelihood = fit.log_likelihood;
            report.converged = fit.converged;
            GroupRow row;
            row.label = label;
            row.n_events = fit.n_events;
            row.n_censored = fit.n_censored;
            row.theta = fit.params.theta();
            row.shape = fit.params.weibull().shape();
            row.scale = fit.params.weibull().scale();
            row.cure_fraction = fit.cure_fraction;
            if (fit.std_errors) {
                row.theta_se = fit.std_errors->params[0];
                row.shape_se = fit.std_errors->params[1];
                row.scale_se = fit.std_errors->params[2];
                row.cure_fraction_se = fit.std_errors->cure_fraction;
            }
            row.converged = fit.converged;
            report.groups.push_back(std::move(row));
        } else {
            report.mode = "stratified";
            const StratifiedFitResult fit = fit_stratified(groups, opts);
            report.log_likelihood = fit.log_likelihood;
            report.converged = fit.converged;
            for (const auto& [label, est] : fit.per_group_theta) {
                GroupRow row;
                row.label = label;
                const auto [ev, cen] = count(groups.at(label));
                row.n_events = ev;
                row.n_censored = cen;
                row.theta = est.theta;
                row.shape = fit.shared_weibull.shape();
                row.scale = fit.shared_weibull.scale();
                row.cure_fraction = cure_fraction(est.theta);
                row.theta_se = est.std_error;
                if (fit.shared_std_errors) {
                    row.shape_se = (*fit.shared_std_errors)[0];
                    row.scale_se = (*fit.shared_std_errors)[1];
                }
                if (est.std_error)
                    row.cure_fraction_se = row.cure_fraction * *est.std_error;
                row.converged = fit.converged && !est.degenerate;
                row.degenerate = est.degenerate;
                report.groups.push_back(std::move(row));
            }
        }

        std::ostringstream json_text;
        cli::write_report_json(json_text, report);
        if (output.empty()) {
            std::cout << json_text.str();
        } else {
            write_text(output + ".json", json_text.str());
            std::ostringstream csv_text;
            cli::write_report_csv(csv_text, report);
            write_text(output + ".csv", csv_text.str());
        }
        return report.any_degeneracy() ? kExitDegenerate : kExitOk;
    }
};

// ----- survival-table --------------------------------------------------------

struct SurvivalTableCmd {
    ParamsSourceFlags params;
    PartitionFlags partition;
    std::vector<double> horizons = {12.0, 18.0, 24.0};
    std::string data_path;
    double data_horizon = 24.0;
    std::string output;

    int run() const {
        for (std::size_t i = 0; i < horizons.size(); ++i) {
            if (horizons[i] < 0.0 || (i > 0 && horizons[i] <= horizons[i - 1]))
                throw ParseError("--horizons must be non-negative and ascending");
        }
        auto [groups, report_partition] = params.resolve();

        // Observed non-recovery shares, when data accompanies the parameters.
        std::map<std::string, double> observed;
        if (!data_path.empty()) {
            const LoadResult loaded = load_csv(data_path, data_horizon);
            const PartitionSpec spec =
                partition.any() ? partition.spec()
                                : (report_partition ? *report_partition : PartitionSpec{});
            std::map<std::string, std::vector<Observation>> data_groups;
            if (!spec.cv_levels.empty() || !spec.bs_levels.empty())
                data_groups = segment(loaded.portfolio, spec).groups;
            else
                data_groups["ALL"] = loaded.portfolio.observations();
            for (const auto& [label, obs] : data_groups) {
                std::size_t censored = 0;
                for (const Observation& o : obs)
                    censored += o.event ? 0 : 1;
                observed[label] = 100.0 * static_cast<double>(censored) /
                                  static_cast<double>(obs.size());
            }
        }

        std::ostringstream out;
        out << "group";
        for (double h : horizons)
            out << ",s_" << h << "m";
        if (!observed.empty())
            out << ",observed_pct_unrecovered";
        out << '\n';
        for (const GroupParams& g : groups) {
            const ModelParams p(g.theta, WeibullParams(g.shape, g.scale));
            out << g.label;
            for (double h : horizons)
                out << ',' << fixed(100.0 * population_survival(h, p), 2);
            if (!observed.empty()) {
                out << ',';
                if (const auto it = observed.find(g.label); it != observed.end())
                    out << fixed(it->second, 2);
            }
            out << '\n';
        }
        write_text(output, out.str());
        return kExitOk;
    }
};

// ----- curves ----------------------------------------------------------------

struct CurvesCmd {
    ParamsSourceFlags params;
    double step = 0.5;
    double horizon = 24.0;
    std::string output;
    std::string svg_path;

    int run() const {
        if (!(step > 0.0))
            throw ParseError("--step must be positive");
        if (!(horizon > 0.0))
            throw ParseError("--horizon must be positive");
        auto [groups, ignored] = params.resolve();
        (void)ignored;

        std::vector<CurveData> curves;
        std::ostringstream out;
        out << "group,t_months,non_recovery_prob\n";
        for (const GroupParams& g : groups) {
            const ModelParams p(g.theta, WeibullParams(g.shape, g.scale));
            CurveData curve;
            curve.label = g.label;
            for (double t = 0.0; t <= horizon + 1e-9; t += step) {
                const double tt = std::min(t, horizon);
                curve.points.emplace_back(tt, population_survival(tt, p));
            }
            if (curve.points.back().first < horizon)
                curve.points.emplace_back(horizon, population_survival(horizon, p));
            for (const auto& [t, prob] : curve.points)
                out << g.label << ',' << fixed(t, 4) << ',' << fixed(prob, 6) << '\n';
            curves.push_back(std::move(curve));
        }
        write_text(output, out.str());
        if (!svg_path.empty()) {
            std::ostringstream svg;
            cli::write_curves_svg(svg, curves, horizon);
            write_text(svg_path, svg.str());
        }
        return kExitOk;
    }
};

// ----- simulate --------------------------------------------------------------

struct SimulateCmd {
    double theta = 0.0;
    double shape = 1.0;
    double scale = 1.0;
    int n = 0;
    double horizon = 24.0;
    std::uint64_t seed = 0;
    std::string output;

    int run() const {
        const SimulationSpec spec{ModelParams(theta, WeibullParams(shape, scale)), n, horizon,
                                  seed};
        const Portfolio p = simulate_portfolio(spec);
        std::ostringstream csv;
        write_portfolio(csv, p);
        write_text(output, csv.str());

        std::size_t censored = 0;
        for (const auto& r : p.records())
            censored += r.recovered ? 0 : 1;
        const double fraction = static_cast<double>(censored) / p.records().size();
        // Keep stdout clean when the CSV itself goes there.
        std::ostream& msg = (output.empty() || output == "-") ? std::cerr : std::cout;
        msg << "censored_fraction " << fixed(fraction, 6) << '\n';
        return kExitOk;
    }
};

// ----- summary ---------------------------------------------------------------

struct SummaryCmd {
    std::string input;
    double horizon = 24.0;
    PartitionFlags partition;
    std::string output;

    int run() const {
        const LoadResult loaded = load_csv(input, horizon);
        std::vector<SummaryRow> rows;
        const auto population = loaded.portfolio.observations();
        if (population.empty())
            throw ParseError("input portfolio is empty");
        rows.push_back(summarize("Population", population));
        if (partition.any()) {
            const Segmentation seg = segment(loaded.portfolio, partition.spec());
            for (const auto& [label, obs] : seg.groups)
                rows.push_back(summarize(label, obs));
        }
        std::ostringstream out;
        write_summary_csv(out, rows);
        write_text(output, out.str());
        return kExitOk;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent competing risks (promotion time) modeling of loan recovery"};
    app.require_subcommand(1);

    FitCmd fit;
    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "Fit the model by censored maximum likelihood, one theta per group");
    fit_cmd->add_option("--input", fit.input, "Portfolio CSV ('-' for stdin)")->required();
    fit_cmd->add_option("--output", fit.output,
                        "Report prefix: writes PREFIX.json and PREFIX.csv (default: JSON on stdout)");
    fit_cmd->add_option("--horizon", fit.horizon, "Censoring horizon in months");
    fit.partition.attach(fit_cmd);
    fit_cmd->add_option("--multistarts", fit.multistarts, "Optimizer restarts");
    fit_cmd->add_option("--max-iterations", fit.max_iterations, "Iteration cap per restart");
    fit_cmd->add_option("--tolerance", fit.tolerance, "Relative objective tolerance");
    fit_cmd->add_option("--optimizer", fit.optimizer, "bfgs or simplex");

    SurvivalTableCmd table;
    CLI::App* table_cmd = app.add_subcommand(
        "survival-table", "Non-recovery probabilities at the requested horizons");
    table.params.attach(table_cmd);
    table_cmd->add_option("--horizons", table.horizons, "Horizons in months, ascending")
        ->delimiter(',');
    table_cmd->add_option("--data", table.data_path,
                          "Portfolio CSV for the observed %-unrecovered column");
    table_cmd->add_option("--data-horizon", table.data_horizon, "Horizon of the data CSV");
    table.partition.attach(table_cmd);
    table_cmd->add_option("--output", table.output, "Output CSV path (default stdout)");

    CurvesCmd curves;
    CLI::App* curves_cmd =
        app.add_subcommand("curves", "Non-recovery curves on a uniform time grid");
    curves.params.attach(curves_cmd);
    curves_cmd->add_option("--step", curves.step, "Grid step in months");
    curves_cmd->add_option("--horizon", curves.horizon, "Grid end in months");
    curves_cmd->add_option("--output", curves.output, "Output CSV path (default stdout)");
    curves_cmd->add_option("--svg", curves.svg_path, "Optional SVG rendering path");

    SimulateCmd sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Draw a synthetic portfolio from the model");
    sim_cmd->add_option("--theta", sim.theta, "Latent cause intensity")->required();
    sim_cmd->add_option("--shape", sim.shape, "Weibull shape")->required();
    sim_cmd->add_option("--scale", sim.scale, "Weibull scale (months)")->required();
    sim_cmd->add_option("--n", sim.n, "Number of contracts")->required();
    sim_cmd->add_option("--horizon", sim.horizon, "Censoring horizon in months");
    sim_cmd->add_option("--seed", sim.seed, "Random seed");
    sim_cmd->add_option("--output", sim.output, "Output CSV path (default stdout)");

    SummaryCmd summary;
    CLI::App* summary_cmd =
        app.add_subcommand("summary", "Per-group counts, non-recovery rates and mean times");
    summary_cmd->add_option("--input", summary.input, "Portfolio CSV ('-' for stdin)")->required();
    summary_cmd->add_option("--horizon", summary.horizon, "Censoring horizon in months");
    summary.partition.attach(summary_cmd);
    summary_cmd->add_option("--output", summary.output, "Output CSV path (default stdout)");

    int rc = kExitOk;
    fit_cmd->callback([&] { rc = fit.run(); });
    table_cmd->callback([&] { rc = table.run(); });
    curves_cmd->callback([&] { rc = curves.run(); });
    sim_cmd->callback([&] { rc = sim.run(); });
    summary_cmd->callback([&] { rc = summary.run(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const ptcure::UnidentifiableError& e) {
        std::cerr << "error: unidentifiable: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ptcure::ParseError& e) {
        std::cerr << "error: parse: " << e.what() << '\n';
        return kExitInput;
    } catch (const ptcure::SegmentationError& e) {
        std::cerr << "error: segmentation: " << e.what() << '\n';
        return kExitInput;
    } catch (const ptcure::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return rc;
}
