#include "tranchelab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "tranchelab/default_sim.hpp"
#include "tranchelab/io.hpp"
#include "tranchelab/pricing.hpp"
#include "tranchelab/sync_stats.hpp"
#include "tranchelab/tranche.hpp"

namespace tranchelab {

namespace {

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::int64_t runs = 100000;
    int workers = 0;
    std::string params;
    std::string out;
    bool perfect_sync = false;
    int maturity = 0;  // 0 = command default
    double coupon = 0.10;
    std::string convention = "face";
    std::string format = "csv";
};

Scenario make_scenario(const GlobalOptions& g, int default_maturity) {
    Scenario s;
    s.countries = g.params.empty() ? canonical_dataset() : read_countries_csv_file(g.params);
    s.factor.sync_mode = g.perfect_sync ? SyncMode::PerfectSync : SyncMode::FactorDriven;
    s.bond.maturity_years = g.maturity > 0 ? g.maturity : default_maturity;
    s.bond.coupon_rate = g.coupon;
    s.bond.loss_convention = parse_convention(g.convention);
    s.n_runs = g.runs;
    s.master_seed = g.seed;
    require_valid(s);
    return s;
}

Provenance provenance_of(const Scenario& s, std::int64_t runs) {
    Provenance p;
    p.scenario_digest = scenario_digest(s);
    p.master_seed = s.master_seed;
    p.n_runs = runs;
    return p;
}

std::vector<std::string> scenario_notes(const Scenario& s) {
    return {"maturity=" + std::to_string(s.bond.maturity_years),
            "convention=" + std::string(to_string(s.bond.loss_convention)),
            "sync_mode=" + std::string(to_string(s.factor.sync_mode))};
}

std::vector<std::string> codes_of(const Scenario& s) {
    std::vector<std::string> codes;
    for (const auto& c : s.countries) codes.push_back(c.code);
    return codes;
}

void emit(const GlobalOptions& g, const std::string& text, std::ostream& out) {
    if (g.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidParameter, "cannot write `" + g.out + "`");
    f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    GlobalOptions g;
    CLI::App app{"Sovereign bond pooling and tranching laboratory", "tranchelab"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--runs", g.runs, "Monte Carlo runs (cohorts)")->check(CLI::PositiveNumber);
    app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--params", g.params, "Country parameter CSV")->envname("TRANCHELAB_PARAMS");
    app.add_option("--out", g.out, "Write output to FILE instead of stdout");
    app.add_flag("--perfect-sync", g.perfect_sync, "One shared recession indicator per year");
    app.add_option("--maturity", g.maturity, "Bond maturity in years")->check(CLI::PositiveNumber);
    app.add_option("--coupon", g.coupon, "Annual coupon rate (fraction)")->check(CLI::NonNegativeNumber);
    app.add_option("--convention", g.convention, "Loss convention")->check(CLI::IsMember({"face", "coupon", "face-only", "coupon-inclusive"}));
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "markdown"}));

    std::string gdp_file;
    int replications = 1000;
    int years = 34;
    auto* sync = app.add_subcommand("sync-stats", "Recession synchronization measures (empirical or model medians)");
    sync->add_option("--gdp", gdp_file, "Growth CSV `code,year,growth_pct` for empirical measures");
    sync->add_option("--replications", replications, "Simulated panels for model medians")->check(CLI::PositiveNumber);
    sync->add_option("--years", years, "Years per simulated panel")->check(CLI::PositiveNumber);

    auto* cds = app.add_subcommand("cds", "Model CDS spreads from 10-year cohorts");
    auto* el = app.add_subcommand("el", "Per-country expected loss rates");

    std::string scheme = "all";
    auto* sweep = app.add_subcommand("tranche-sweep", "Senior/junior expected losses across subordination levels");
    sweep->add_option("--scheme", scheme, "gdp | two-to-one | china-debtors | equal | all");

    std::string country;
    double kappa = 0.25;
    auto* national = app.add_subcommand("national-tranche", "Tranche one country's bonds alone");
    national->add_option("--country", country, "Country code or name")->required();
    national->add_option("--kappa", kappa, "Subordination level");

    double debt = 32e9, deal_kappa = 0.5, multiple = 2.0;
    auto* deal = app.add_subcommand("deal", "Structure a debt-swap vehicle");
    deal->add_option("--debt", debt, "Debtor bonds purchased (currency units)");
    deal->add_option("--kappa", deal_kappa, "Subordination level");
    deal->add_option("--multiple", multiple, "Anchor bonds purchased per unit of debtor bonds");

    int panel_years = 34;
    auto* panel_cmd = app.add_subcommand("simulate-panel", "Dump one simulated recession panel");
    panel_cmd->add_option("--years", panel_years, "Years in the panel")->check(CLI::PositiveNumber);

    auto* countries_cmd = app.add_subcommand("countries", "Write the country parameter file");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: usage: " << msg << '\n';
        return 2;
    }

    try {
        const ReportFormat fmt = parse_format(g.format);
        if (*sync) {
            if (!gdp_file.empty()) {
                std::ifstream f(gdp_file);
                if (!f) throw Error(ErrorCode::MalformedCsv, "cannot open `" + gdp_file + "`");
                const auto ing = ingest_gdp_growth(f);
                const SyncStats s = sync_stats(ing.recessions);
                const std::vector<std::string> prov = {kVersionTag, "source=empirical",
                                                       "years=" + std::to_string(ing.recessions.years()),
                                                       "countries=" + std::to_string(ing.recessions.countries())};
                emit(g, emit_report(sync_stats_report(s, prov), fmt), out);
            } else {
                const Scenario s = make_scenario(g, 5);
                const SyncStats m = median_sync_stats(s, replications, years, g.workers);
                auto prov = provenance_lines(provenance_of(s, replications),
                                             {"source=model", "replications=" + std::to_string(replications),
                                              "years=" + std::to_string(years),
                                              "sync_mode=" + std::string(to_string(s.factor.sync_mode))});
                emit(g, emit_report(sync_stats_report(m, std::move(prov)), fmt), out);
            }
        } else if (*cds) {
            Scenario s = make_scenario(g, kCdsMaturityYears);
            s.bond.maturity_years = kCdsMaturityYears;
            const auto quotes = cds_quotes(s, g.workers);
            emit(g, emit_report(cds_report(quotes, provenance_lines(provenance_of(s, s.n_runs), scenario_notes(s))), fmt),
                 out);
        } else if (*el) {
            const Scenario s = make_scenario(g, 5);
            const auto batch = cohort_batch(s, g.workers);
            const auto est = country_expected_losses(batch);
            emit(g,
                 emit_report(el_report(codes_of(s), est, s.bond.loss_convention,
                                       provenance_lines(provenance_of(s, s.n_runs), scenario_notes(s))),
                             fmt),
                 out);
        } else if (*sweep) {
            const Scenario s = make_scenario(g, 5);
            const std::vector<WeightScheme> schemes =
                scheme == "all" ? standard_schemes() : std::vector<WeightScheme>{parse_scheme(scheme)};
            const auto curves = subordination_sweeps(s, schemes, g.workers);
            emit(g,
                 emit_report(tranche_report(curves, provenance_lines(provenance_of(s, s.n_runs), scenario_notes(s))),
                             fmt),
                 out);
        } else if (*national) {
            const Scenario s = make_scenario(g, 5);
            const CountryParams& c = s.countries[index_of(s.countries, country)];
            const ElEstimate e = national_tranching(c, kappa, s, g.workers);
            emit(g,
                 emit_report(national_report(c.code, kappa, e,
                                             provenance_lines(provenance_of(s, s.n_runs), scenario_notes(s))),
                             fmt),
                 out);
        } else if (*deal) {
            const DealSheet d = structure_deal(debt, deal_kappa, multiple);
            emit(g, app.get_option("--format")->count() > 0 ? emit_report(deal_report(d), fmt)
                                                                   : deal_balance_sheet(d),
                 out);
        } else if (*panel_cmd) {
            const Scenario s = make_scenario(g, 5);
            RandomStream rng = substream(s.master_seed, 0);
            const CyclePanel p = simulate_panel(s.factor, panel_years, static_cast<int>(s.countries.size()), rng);
            std::ostringstream text;
            for (const auto& line : provenance_lines(provenance_of(s, 1),
                                                     {"years=" + std::to_string(panel_years),
                                                      "sync_mode=" + std::string(to_string(s.factor.sync_mode))}))
                text << "# " << line << '\n';
            write_panel_csv(text, p, codes_of(s));
            emit(g, text.str(), out);
        } else if (*countries_cmd) {
            const Scenario s = make_scenario(g, 5);
            std::ostringstream text;
            write_countries_csv(text, s.countries);
            emit(g, text.str(), out);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::UsageError ? 2 : 1;
    }
}

}  // namespace tranchelab
