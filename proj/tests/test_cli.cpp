// End-to-end runs of the command-line tool against temp files.
#include "doctest.h"

#ifdef PTCURE_CLI_PATH

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "ptcure_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string(PTCURE_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        n += c == '\n' ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("simulate writes the requested portfolio") {
    const fs::path csv = workdir() / "cured.csv";
    const auto r = run("simulate --theta 0 --shape 1.157 --scale 18.762 --n 100 --horizon 24 "
                       "--seed 1 --output " +
                       csv.string());
    CHECK(r.exit_code == 0);
    const std::string text = slurp(csv);
    CHECK(count_lines(text) == 101); // header + 100 rows
    CHECK(text.find(",24,0,1,1") != std::string::npos);
    CHECK(r.out.find("censored_fraction 1.000000") != std::string::npos);
}

TEST_CASE("simulate is reproducible from the seed") {
    const fs::path a = workdir() / "a.csv";
    const fs::path b = workdir() / "b.csv";
    run("simulate --theta 0.7 --shape 1.2 --scale 15 --n 400 --seed 7 --output " + a.string());
    run("simulate --theta 0.7 --shape 1.2 --scale 15 --n 400 --seed 7 --output " + b.string());
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("simulated censored fraction approaches the model value") {
    const fs::path csv = workdir() / "big.csv";
    const auto r = run("simulate --theta 0.614 --shape 1.157 --scale 18.762 --n 100000 "
                       "--horizon 24 --seed 3 --output " +
                       csv.string());
    CHECK(r.exit_code == 0);
    const auto pos = r.out.find("censored_fraction ");
    REQUIRE(pos != std::string::npos);
    const double fraction = std::stod(r.out.substr(pos + 18));
    CHECK(std::abs(fraction - 0.6365) < 0.01);
}

TEST_CASE("fit recovers simulated two-group parameters and feeds the table") {
    const fs::path data = workdir() / "twogroup.csv";
    // Two segments with a shared Weibull and different intensities.
    {
        const fs::path part1 = workdir() / "g1.csv";
        const fs::path part2 = workdir() / "g2.csv";
        run("simulate --theta 0.614 --shape 1.157 --scale 18.762 --n 4000 --seed 11 --output " +
            part1.string());
        run("simulate --theta 1.422 --shape 1.157 --scale 18.762 --n 4000 --seed 12 --output " +
            part2.string());
        // Merge, assigning fx_cv 1/2 and unique ids.
        std::ifstream in1(part1), in2(part2);
        std::ofstream out(data);
        out << "contract_id,time_months,recovered,fx_bs,fx_cv\n";
        std::string line;
        std::getline(in1, line);
        int id = 0;
        while (std::getline(in1, line)) {
            const auto comma = line.find(',');
            const auto rest = line.substr(comma);
            out << "A" << ++id << rest.substr(0, rest.rfind(',')) << ",1\n";
        }
        std::getline(in2, line);
        while (std::getline(in2, line)) {
            const auto comma = line.find(',');
            const auto rest = line.substr(comma);
            out << "B" << ++id << rest.substr(0, rest.rfind(',')) << ",2\n";
        }
    }

    const fs::path prefix = workdir() / "fitreport";
    const auto r = run("fit --input " + data.string() + " --cv-levels 1,2 --output " +
                       prefix.string());
    CHECK(r.exit_code == 0);

    std::ifstream jin(prefix.string() + ".json");
    REQUIRE(jin.good());
    nlohmann::json report;
    jin >> report;
    CHECK(report.at("mode") == "stratified");
    REQUIRE(report.at("groups").size() == 2);
    double theta1 = 0.0, theta2 = 0.0;
    for (const auto& g : report.at("groups")) {
        if (g.at("label") == "CV1")
            theta1 = g.at("theta").get<double>();
        if (g.at("label") == "CV2")
            theta2 = g.at("theta").get<double>();
    }
    CHECK(std::abs(theta1 - 0.614) / 0.614 < 0.15);
    CHECK(std::abs(theta2 - 1.422) / 1.422 < 0.15);

    // CSV twin exists and has a row per group.
    CHECK(count_lines(slurp(prefix.string() + ".csv")) == 3);

    // survival-table from the report, with the observed column.
    const auto table = run("survival-table --params " + prefix.string() +
                           ".json --horizons 12,18,24 --data " + data.string());
    CHECK(table.exit_code == 0);
    CHECK(table.out.find("group,s_12m,s_18m,s_24m,observed_pct_unrecovered") != std::string::npos);
    CHECK(count_lines(table.out) == 3);

    // Emitted percentages reparse into [0,100], fall with the horizon, and sit
    // within 3 binomial standard errors of the observed share (n = 4000).
    std::istringstream tin(table.out);
    std::string line;
    std::getline(tin, line);
    while (std::getline(tin, line)) {
        std::vector<double> vals;
        std::size_t pos = line.find(',');
        while (pos != std::string::npos) {
            const std::size_t next = line.find(',', pos + 1);
            vals.push_back(std::stod(line.substr(pos + 1, next - pos - 1)));
            pos = next;
        }
        REQUIRE(vals.size() == 4);
        for (double v : vals) {
            CHECK(v >= 0.0);
            CHECK(v <= 100.0);
        }
        CHECK(vals[0] >= vals[1]);
        CHECK(vals[1] >= vals[2]);
        const double p = vals[3] / 100.0;
        const double se_pp = 100.0 * std::sqrt(p * (1.0 - p) / 4000.0);
        CHECK(std::abs(vals[2] - vals[3]) < 3.0 * se_pp);
    }
}

TEST_CASE("fit reports a degenerate group and exits accordingly") {
    const fs::path csv = workdir() / "degenerate.csv";
    {
        std::ofstream out(csv);
        out << "contract_id,time_months,recovered,fx_bs,fx_cv\n";
        int id = 0;
        for (int i = 0; i < 300; ++i) {
            const bool rec = i % 2 == 0;
            out << "a" << ++id << ',' << (rec ? "8.5" : "24") << ',' << (rec ? 1 : 0) << ",1,1\n";
        }
        for (int i = 0; i < 100; ++i)
            out << "b" << ++id << ",24,0,1,2\n"; // nothing ever recovers here
    }
    const fs::path prefix = workdir() / "degenerate_report";
    const auto r = run("fit --input " + csv.string() + " --cv-levels 1,2 --output " +
                       prefix.string());
    CHECK(r.exit_code == 2);
    std::ifstream jin(prefix.string() + ".json");
    REQUIRE(jin.good());
    nlohmann::json report;
    jin >> report;
    bool found_degenerate = false;
    for (const auto& g : report.at("groups")) {
        if (g.at("label") == "CV2") {
            found_degenerate = g.at("degenerate").get<bool>();
            CHECK(g.at("theta").get<double>() == 0.0);
        }
    }
    CHECK(found_degenerate);
}

TEST_CASE("fit on all-censored input exits with the degeneracy code") {
    const fs::path csv = workdir() / "allcensored.csv";
    run("simulate --theta 0 --shape 1 --scale 10 --n 50 --seed 2 --output " + csv.string());
    const auto r = run("fit --input " + csv.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("unidentifiable") != std::string::npos);
}

TEST_CASE("missing column is an input error naming the column") {
    const fs::path csv = workdir() / "badheader.csv";
    std::ofstream(csv) << "contract_id,time_months,recovered,fx_bs\nx,24,0,1\n";
    const auto r = run("fit --input " + csv.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("fx_cv") != std::string::npos);
}

TEST_CASE("survival-table matches the published rows") {
    const auto r =
        run("survival-table --theta 0.614 --shape 1.157 --scale 18.762 --horizons 12,18,24");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ALL,75.90,68.57,63.66") != std::string::npos);

    const auto r2 = run("survival-table --group X=1.849,1.304,18.551 --horizons 12,18,24");
    CHECK(r2.out.find("X,44.94,31.92,24.84") != std::string::npos);

    const auto r0 = run("survival-table --theta 0.9 --shape 1.3 --scale 20 --horizons 0,12");
    CHECK(r0.out.find("ALL,100.00,") != std::string::npos);

    const auto bad = run("survival-table --theta 0.9 --shape 1.3 --scale 20 --horizons 12,6");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("curves order by intensity and handle edge groups") {
    const auto r = run("curves --group CV1xBS1=0.541,1.297,28.504 --group CV1xBS2=1.458,1.297,28.504 "
                       "--group CV2xBS1=0.544,1.304,18.551 --group CV2xBS2=1.849,1.304,18.551 "
                       "--step 6 --horizon 24");
    CHECK(r.exit_code == 0);
    // Collect the value at t = 24 for each group.
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "group,t_months,non_recovery_prob");
    std::map<std::string, double> at24;
    std::map<std::string, double> at0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        const std::string label = line.substr(0, c1);
        const double t = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double v = std::stod(line.substr(c2 + 1));
        if (t == 0.0)
            at0[label] = v;
        if (t == 24.0)
            at24[label] = v;
    }
    for (const auto& [label, v] : at0)
        CHECK(v == 1.0);
    CHECK(at24.at("CV2xBS2") < at24.at("CV1xBS2"));
    CHECK(at24.at("CV1xBS2") < at24.at("CV2xBS1"));
    CHECK(at24.at("CV2xBS1") < at24.at("CV1xBS1"));

    const auto cured = run("curves --theta 0 --shape 1.157 --scale 18.762 --step 6 --horizon 24");
    std::istringstream cin2(cured.out);
    std::getline(cin2, line);
    while (std::getline(cin2, line))
        CHECK(line.substr(line.rfind(',') + 1) == "1.000000");

    const fs::path svg = workdir() / "curves.svg";
    const auto with_svg = run("curves --theta 0.614 --shape 1.157 --scale 18.762 --svg " +
                              svg.string());
    CHECK(with_svg.exit_code == 0);
    CHECK(slurp(svg).find("<svg") != std::string::npos);
}

TEST_CASE("summary echoes known counts") {
    const fs::path csv = workdir() / "summary.csv";
    {
        std::ofstream out(csv);
        out << "contract_id,time_months,recovered,fx_bs,fx_cv\n";
        int id = 0;
        for (int i = 0; i < 7; ++i)
            out << "r" << ++id << ",5.5,1,1,1\n";
        for (int i = 0; i < 3; ++i)
            out << "r" << ++id << ",24,0,1,1\n";
        for (int i = 0; i < 4; ++i)
            out << "r" << ++id << ",11,1,2,2\n";
    }
    const auto r = run("summary --input " + csv.string() + " --bs-levels 1,2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Population,14,11,3,21.42") != std::string::npos);
    CHECK(r.out.find("BS1,10,7,3,30.00,5.50") != std::string::npos);
    CHECK(r.out.find("BS2,4,4,0,0.00,11.00") != std::string::npos);

    const auto bad = run("summary --input " + csv.string() + " --bs-levels 4");
    CHECK(bad.exit_code == 1);
}

TEST_SUITE_END();

#endif // PTCURE_CLI_PATH
