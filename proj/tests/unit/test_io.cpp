#include <sstream>

#include "doctest.h"
#include "tranchelab/io.hpp"

using namespace tranchelab;

namespace {

IngestedGrowth ingest(const std::string& text) {
    std::istringstream in(text);
    return ingest_gdp_growth(in);
}

}  // namespace

TEST_CASE("growth ingestion applies the sign rule") {
    const auto g = ingest("code,year,growth_pct\nBRA,2015,-3.5\nBRA,2016,0.0\nCHN,2015,6.9\nCHN,2016,\n");
    REQUIRE(g.growth.codes == std::vector<std::string>{"CHN", "BRA"});  // canonical column order
    REQUIRE(g.growth.years == std::vector<int>{2015, 2016});
    CHECK(g.recessions.observed(0, 1));
    CHECK(g.recessions.state(0, 1) == 1);
    CHECK(g.recessions.state(1, 1) == 0);  // zero growth is not a recession
    CHECK(g.recessions.state(0, 0) == 0);
    CHECK_FALSE(g.recessions.observed(1, 0));
    CHECK_FALSE(g.growth.growth_pct[1][0].has_value());
    CHECK(*g.growth.growth_pct[0][1] == -3.5);
}

TEST_CASE("growth ingestion fills missing years as gaps") {
    const auto g = ingest("code,year,growth_pct\nIND,1991,1.0\nIND,1994,-1.0\nRUS,1992,NA\n");
    CHECK(g.growth.years.size() == 4);
    CHECK_FALSE(g.recessions.observed(1, 0));
    CHECK_FALSE(g.recessions.observed(1, 1));
    CHECK(g.recessions.observed(3, 0));
}

TEST_CASE("growth ingestion errors") {
    auto code_of = [](const std::string& text) {
        try {
            ingest(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::UsageError;
    };
    CHECK(code_of("code,year,growth_pct\nBRA,2015,1\nBRA,2015,2\n") == ErrorCode::DuplicateCell);
    CHECK(code_of("code,year,growth_pct\nXYZ,2015,1\n") == ErrorCode::UnknownCountryCode);
    CHECK(code_of("country,year,growth\nBRA,2015,1\n") == ErrorCode::MalformedCsv);
    CHECK(code_of("code,year,growth_pct\nBRA,2015\n") == ErrorCode::MalformedCsv);
    CHECK(code_of("code,year,growth_pct\nBRA,20x5,1\n") == ErrorCode::MalformedCsv);
    CHECK(code_of("code,year,growth_pct\nBRA,2015,abc\n") == ErrorCode::MalformedCsv);
    CHECK(code_of("code,year,growth_pct\n") == ErrorCode::EmptyPanel);
    try {
        ingest("code,year,growth_pct\nBRA,2015,1\nBRA,2016,x\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);  // line diagnostics
    }
}

TEST_CASE("panel dump round trips with identical statistics") {
    FactorParams fp;
    RandomStream rng = substream(7, 0);
    CyclePanel panel = simulate_panel(fp, 34, 18, rng);
    panel.set_observed(0, 3, false);
    panel.set_observed(5, 17, false);
    std::vector<std::string> codes;
    for (const auto& c : canonical_dataset()) codes.push_back(c.code);

    std::ostringstream out;
    write_panel_csv(out, panel, codes);
    std::istringstream in(out.str());
    const LabelledPanel back = read_panel_csv(in);
    CHECK(back.codes == codes);
    CHECK(back.panel == panel);
    const SyncStats a = sync_stats(panel);
    const SyncStats b = sync_stats(back.panel);
    CHECK(a.recession_rate == b.recession_rate);
    CHECK(a.concordance_rate == b.concordance_rate);
    CHECK(a.pca_share == b.pca_share);
    CHECK(a.pca_tetrachoric_share == b.pca_tetrachoric_share);
}

TEST_CASE("number formatting") {
    CHECK(format_percent(0.13094) == "13.1");
    CHECK(format_percent(0.0) == "0.0");
    CHECK(format_percent(-0.0001) == "0.0");
    CHECK(format_fixed(0.25, 1) == "0.3");
    CHECK(format_fixed(-0.25, 1) == "-0.3");
    CHECK(format_fixed(2.5, 0) == "3");
    CHECK(format_fixed(0.125, 2) == "0.13");
    CHECK(format_fixed(1.005, 2) == "1.00");  // the double lies just below 1.005
    CHECK(format_short(0.05) == "0.05");
    CHECK(format_short(0.0) == "0");
    CHECK(format_short(0.5) == "0.5");
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK(parse_format("markdown") == ReportFormat::Markdown);
    CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("report emission") {
    Report r{"T9", {"a", "b"}, {}, {"seed=1"}};
    CHECK(emit_report(r, ReportFormat::Csv) == "# seed=1\na,b\n");
    r.rows = {{"1", ""}, {"2", "x"}};
    CHECK(emit_report(r, ReportFormat::Csv) == "# seed=1\na,b\n1,\n2,x\n");
    const std::string md = emit_report(r, ReportFormat::Markdown);
    CHECK(md.find("| a | b |") != std::string::npos);
    CHECK(md.find("<!--") == 0);
    r.rows.push_back({"3"});
    CHECK_THROWS_AS(emit_report(r, ReportFormat::Csv), Error);
}

TEST_CASE("tranche report layout") {
    Scenario s = canonical_scenario();
    s.n_runs = 500;
    s.bond.maturity_years = 5;
    const auto curves = subordination_sweeps(s, standard_schemes());
    const Report r = tranche_report(curves, {"seed=0"});
    CHECK(r.columns.front() == "kappa");
    CHECK(r.columns.size() == 9);
    CHECK(r.rows.size() == 11);
    const std::string csv = emit_report(r, ReportFormat::Csv);
    const auto first = csv.find('\n', csv.find("kappa")) + 1;
    CHECK(csv.compare(first, 2, "0,") == 0);
    CHECK(r.rows[0][2].empty());
    CHECK_FALSE(r.rows[1][2].empty());
    CHECK(r.rows[5][0] == "0.25");

    std::istringstream in(csv);
    const Report back = parse_report_csv(in, "T4");
    CHECK(back.columns == r.columns);
    CHECK(back.rows == r.rows);
}

TEST_CASE("every report parses back") {
    Scenario s = canonical_scenario();
    s.n_runs = 300;
    const auto batch = cohort_batch(s);
    std::vector<std::string> codes;
    for (const auto& c : s.countries) codes.push_back(c.code);
    SyncStats st{0.12, 0.85, 0.35, 0.55};
    std::vector<Report> reports{
        sync_stats_report(st),
        cds_report(cds_quotes(s)),
        el_report(codes, country_expected_losses(batch), LossConvention::FaceOnly),
        national_report("CHN", 0.25, ElEstimate{0.0145, 0.0003, 300}),
        deal_report(structure_deal(32e9, 0.5, 2.0)),
    };
    for (const auto& r : reports) {
        CAPTURE(r.table_id);
        std::istringstream in(emit_report(r, ReportFormat::Csv));
        const Report back = parse_report_csv(in);
        CHECK(back.columns == r.columns);
        CHECK(back.rows == r.rows);
        for (const auto& row : back.rows) CHECK(row.size() == back.columns.size());
    }
    CHECK(reports[0].rows.at(0).at(0) == "0.12");
}

TEST_CASE("provenance lines") {
    Provenance p;
    p.master_seed = 9;
    p.n_runs = 100;
    p.scenario_digest = 0xabcdef;
    const auto lines = provenance_lines(p, {"scheme=all"});
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == kVersionTag);
    CHECK(lines[1] == "seed=9");
    CHECK(lines[2] == "runs=100");
    CHECK(lines[3] == "scenario_digest=0000000000abcdef");
    CHECK(lines[4] == "scheme=all");
}

TEST_CASE("deal sheet text") {
    const std::string text = deal_balance_sheet(structure_deal(32e9, 0.5, 2.0));
    CHECK(text.find("48000000000.00") != std::string::npos);
    CHECK(text.find("64000000000.00") != std::string::npos);
}
