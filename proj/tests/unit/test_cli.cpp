#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tranchelab/cli.hpp"
#include "tranchelab/io.hpp"

using namespace tranchelab;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tranchelab");
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

Run process(const std::string& args) {
    const std::string cmd = std::string(TRANCHELAB_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text, {}};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tranchelab_test_" + name);
}

}  // namespace

TEST_CASE("deal example") {
    const Run r = cli({"deal", "--debt", "32e9", "--kappa", "0.5", "--multiple", "2"});
    CHECK(r.status == 0);
    CHECK(r.out.find("48000000000.00") != std::string::npos);
    CHECK(r.out.find("64000000000.00") != std::string::npos);

    const Run csv = cli({"--format", "csv", "deal", "--debt", "32e9", "--kappa", "0.5", "--multiple", "2"});
    CHECK(csv.status == 0);
    std::istringstream in(csv.out);
    const Report rep = parse_report_csv(in);
    bool senior = false;
    for (const auto& row : rep.rows)
        if (row[0] == "senior_issued") senior = row[1] == "48000000000.00";
    CHECK(senior);
}

TEST_CASE("subcommands are byte deterministic across workers") {
    const std::vector<std::vector<std::string>> commands{
        {"sync-stats", "--replications", "3", "--seed", "7"},
        {"cds", "--runs", "2000"},
        {"el", "--runs", "2000", "--convention", "coupon"},
        {"tranche-sweep", "--runs", "2000"},
        {"national-tranche", "--country", "CHN", "--runs", "2000"},
        {"deal"},
        {"simulate-panel", "--years", "10"},
        {"countries"},
    };
    for (auto cmd : commands) {
        CAPTURE(cmd[0]);
        cmd.insert(cmd.end(), {"--workers", "1"});
        const Run a = cli(cmd);
        const Run b = cli(cmd);
        cmd.back() = "8";
        const Run c = cli(cmd);
        CHECK(a.status == 0);
        CHECK(a.err.empty());
        CHECK_FALSE(a.out.empty());
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }
}

TEST_CASE("global flags are accepted before the subcommand") {
    const Run a = cli({"--seed", "3", "--runs", "500", "el"});
    const Run b = cli({"el", "--seed", "3", "--runs", "500"});
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# seed=3") != std::string::npos);
    CHECK(a.out.find("# runs=500") != std::string::npos);
}

TEST_CASE("convention spellings") {
    const Run a = cli({"el", "--runs", "200", "--convention", "coupon"});
    const Run b = cli({"el", "--runs", "200", "--convention", "coupon-inclusive"});
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("usage errors exit 2") {
    Run r = cli({"cds", "--bogus"});
    CHECK(r.status == 2);
    CHECK(r.err.rfind("error:", 0) == 0);
    CHECK(cli({}).status == 2);
    CHECK(cli({"frobnicate"}).status == 2);
    CHECK(cli({"el", "--convention", "neither"}).status == 2);
    CHECK(cli({"national-tranche"}).status == 2);
    CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("computational errors exit 1") {
    Run r = cli({"deal", "--kappa", "1.5"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error: InvalidSubordination", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK(cli({"national-tranche", "--country", "XYZ", "--runs", "10"}).status == 1);
    CHECK(cli({"tranche-sweep", "--scheme", "golden", "--runs", "10"}).status == 1);
    CHECK(cli({"sync-stats", "--gdp", "/nonexistent/file.csv"}).status == 1);
}

TEST_CASE("output file and parameter file") {
    const auto params = temp_path("params.csv");
    const auto out = temp_path("out.csv");
    {
        const Run dump = cli({"countries", "--out", params.string()});
        CHECK(dump.status == 0);
        CHECK(dump.out.empty());
    }
    const Run direct = cli({"el", "--runs", "300"});
    const Run via_file = cli({"el", "--runs", "300", "--params", params.string(), "--out", out.string()});
    CHECK(via_file.status == 0);
    std::ifstream f(out);
    std::stringstream text;
    text << f.rdbuf();
    CHECK(text.str() == direct.out);

    std::ofstream(params) << "code,pd_normal\nAAA,0.1\n";
    CHECK(cli({"el", "--runs", "10", "--params", params.string()}).status == 1);
    std::filesystem::remove(params);
    std::filesystem::remove(out);
}

TEST_CASE("empirical sync stats from a growth file") {
    const auto gdp = temp_path("gdp.csv");
    {
        std::ofstream f(gdp);
        f << "code,year,growth_pct\n";
        for (int y = 2000; y < 2010; ++y) {
            f << "CHN," << y << "," << (y % 3 == 0 ? -1.0 : 2.0) << "\n";
            f << "BRA," << y << "," << (y % 3 == 0 ? -0.5 : 1.0) << "\n";
            f << "IND," << y << "," << (y % 4 == 0 ? -0.5 : 1.0) << "\n";
        }
    }
    const Run r = cli({"sync-stats", "--gdp", gdp.string()});
    CHECK(r.status == 0);
    std::istringstream in(r.out);
    const Report rep = parse_report_csv(in);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0][0] == "0.30");  // 9 recession cells out of 30
    std::filesystem::remove(gdp);
}

TEST_CASE("simulated panel re-ingests") {
    const Run r = cli({"simulate-panel", "--years", "34", "--seed", "4"});
    std::istringstream in(r.out);
    const LabelledPanel p = read_panel_csv(in);
    CHECK(p.codes.size() == 18);
    CHECK(p.panel.years() == 34);
}

TEST_CASE("executable exit codes") {
    Run r = process("deal --debt 32e9 --kappa 0.5 --multiple 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("48000000000.00") != std::string::npos);
    r = process("deal --nope");
    CHECK(r.status == 2);
    CHECK(r.out.rfind("error:", 0) == 0);
    r = process("deal --kappa 2");
    CHECK(r.status == 1);
    CHECK(r.out.rfind("error:", 0) == 0);
}

TEST_CASE("parameter file from the environment") {
    const auto params = temp_path("env_params.csv");
    std::ofstream(params) << "not,a,param,file\n";
    setenv("TRANCHELAB_PARAMS", params.string().c_str(), 1);
    CHECK(cli({"el", "--runs", "10"}).status == 1);
    unsetenv("TRANCHELAB_PARAMS");
    CHECK(cli({"el", "--runs", "10"}).status == 0);
    std::filesystem::remove(params);
}
