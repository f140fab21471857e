#include "tranchelab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "csv.hpp"

namespace tranchelab {

IngestedGrowth ingest_gdp_growth(std::istream& in, const std::vector<CountryParams>& known) {
    auto rows = detail::read_rows(in);
    detail::expect_header(rows, {"code", "year", "growth_pct"});

    std::map<std::pair<std::string, int>, std::optional<double>> cells;
    std::set<std::string> present;
    int min_year = 0, max_year = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        detail::expect_width(row, 3);
        const std::string& code = row.fields[0];
        if (std::none_of(known.begin(), known.end(), [&](const auto& c) { return c.code == code; }))
            throw Error(ErrorCode::UnknownCountryCode, "line " + std::to_string(row.line) + ": unknown code `" + code + "`");
        const int year = static_cast<int>(detail::parse_int(row, 1));
        std::optional<double> g;
        if (!row.fields[2].empty() && row.fields[2] != "NA") g = detail::parse_double(row, 2);
        if (!cells.emplace(std::make_pair(code, year), g).second)
            throw Error(ErrorCode::DuplicateCell, "line " + std::to_string(row.line) + ": duplicate " + code + " " +
                                                      std::to_string(year));
        if (present.empty()) min_year = max_year = year;
        min_year = std::min(min_year, year);
        max_year = std::max(max_year, year);
        present.insert(code);
    }
    if (cells.empty()) throw Error(ErrorCode::EmptyPanel, "growth file has no data rows");

    IngestedGrowth out;
    for (const auto& c : known)
        if (present.count(c.code)) out.growth.codes.push_back(c.code);
    for (int y = min_year; y <= max_year; ++y) out.growth.years.push_back(y);

    const int n_years = static_cast<int>(out.growth.years.size());
    const int n = static_cast<int>(out.growth.codes.size());
    out.growth.growth_pct.assign(static_cast<std::size_t>(n_years), std::vector<std::optional<double>>(static_cast<std::size_t>(n)));
    out.recessions = CyclePanel(n_years, n);
    for (int t = 0; t < n_years; ++t)
        for (int i = 0; i < n; ++i) {
            auto it = cells.find({out.growth.codes[static_cast<std::size_t>(i)], out.growth.years[static_cast<std::size_t>(t)]});
            std::optional<double> g = it == cells.end() ? std::nullopt : it->second;
            out.growth.growth_pct[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = g;
            out.recessions.set_observed(t, i, g.has_value());
            out.recessions.set_state(t, i, g.has_value() && *g < 0.0);
        }
    return out;
}

void write_panel_csv(std::ostream& out, const CyclePanel& panel, const std::vector<std::string>& codes) {
    if (static_cast<int>(codes.size()) != panel.countries())
        throw Error(ErrorCode::InvalidParameter, "code list does not match panel width");
    for (std::size_t i = 0; i < codes.size(); ++i) out << (i ? "," : "") << codes[i];
    out << '\n';
    for (int t = 0; t < panel.years(); ++t) {
        for (int i = 0; i < panel.countries(); ++i) {
            if (i) out << ',';
            if (panel.observed(t, i)) out << (panel.state(t, i) ? '1' : '0');
        }
        out << '\n';
    }
}

LabelledPanel read_panel_csv(std::istream& in) {
    std::vector<detail::CsvRow> rows;
    {
        // Keep rows whose cells are all empty (a year with no observations).
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            auto t = detail::trim(line);
            if (!t.empty() && t.front() == '#') continue;
            if (t.empty() && rows.empty()) continue;
            if (t.empty()) continue;
            rows.push_back({n, detail::split_fields(t)});
        }
    }
    if (rows.empty()) throw Error(ErrorCode::MalformedCsv, "missing header row");
    LabelledPanel lp;
    lp.codes = rows.front().fields;
    const int n = static_cast<int>(lp.codes.size());
    lp.panel = CyclePanel(static_cast<int>(rows.size()) - 1, n);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        detail::expect_width(rows[r], lp.codes.size());
        const int t = static_cast<int>(r) - 1;
        for (int i = 0; i < n; ++i) {
            const std::string& f = rows[r].fields[static_cast<std::size_t>(i)];
            if (f.empty()) {
                lp.panel.set_observed(t, i, false);
                continue;
            }
            lp.panel.set_state(t, i, detail::parse_bool01(rows[r], static_cast<std::size_t>(i)));
        }
    }
    return lp;
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return value != value ? "nan" : (value > 0 ? "inf" : "-inf");
    const double scale = std::pow(10.0, decimals);
    double r = std::round(value * scale) / scale;
    if (r == 0.0) r = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

std::string format_percent(double fraction) { return format_fixed(fraction * 100.0, 1); }

std::string format_short(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

ReportFormat parse_format(std::string_view text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    throw Error(ErrorCode::UsageError, "unknown format `" + std::string(text) + "`");
}

std::string emit_report(const Report& report, ReportFormat format) {
    for (const auto& row : report.rows)
        if (row.size() != report.columns.size())
            throw Error(ErrorCode::InvalidParameter, "report " + report.table_id + ": row has " +
                                                         std::to_string(row.size()) + " cells, schema has " +
                                                         std::to_string(report.columns.size()));
    std::ostringstream out;
    auto join = [&](const std::vector<std::string>& cells, const char* sep, const char* open, const char* close) {
        out << open;
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? sep : "") << cells[i];
        out << close << '\n';
    };
    if (format == ReportFormat::Csv) {
        for (const auto& p : report.provenance) out << "# " << p << '\n';
        join(report.columns, ",", "", "");
        for (const auto& row : report.rows) join(row, ",", "", "");
    } else {
        if (!report.provenance.empty()) {
            out << "<!--\n";
            for (const auto& p : report.provenance) out << p << '\n';
            out << "-->\n";
        }
        join(report.columns, " | ", "| ", " |");
        out << '|';
        for (std::size_t i = 0; i < report.columns.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& row : report.rows) join(row, " | ", "| ", " |");
    }
    return out.str();
}

std::vector<std::string> provenance_lines(const Provenance& p, const std::vector<std::string>& extra) {
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(p.scenario_digest));
    std::vector<std::string> lines = {p.version, "seed=" + std::to_string(p.master_seed),
                                      "runs=" + std::to_string(p.n_runs), std::string("scenario_digest=") + digest};
    lines.insert(lines.end(), extra.begin(), extra.end());
    return lines;
}

Report sync_stats_report(const SyncStats& s, std::vector<std::string> provenance) {
    return {"T1",
            {"recession_rate", "concordance_rate", "pca", "pca_tetrachoric"},
            {{format_fixed(s.recession_rate, 2), format_fixed(s.concordance_rate, 2), format_fixed(s.pca_share, 2),
              format_fixed(s.pca_tetrachoric_share, 2)}},
            std::move(provenance)};
}

Report cds_report(const std::vector<CdsQuote>& quotes, std::vector<std::string> provenance) {
    Report r{"T3", {"code", "cum_pd", "mean_lgd", "hazard", "spread_pct"}, {}, std::move(provenance)};
    for (const auto& q : quotes)
        r.rows.push_back({q.code, format_fixed(q.cum_pd, 6), q.no_defaults ? "" : format_fixed(q.mean_lgd, 6),
                          format_fixed(q.hazard, 6), format_percent(q.spread)});
    return r;
}

Report el_report(const std::vector<std::string>& codes, const std::vector<ElEstimate>& el, LossConvention convention,
                 std::vector<std::string> provenance) {
    if (codes.size() != el.size()) throw Error(ErrorCode::InvalidParameter, "codes and estimates differ in length");
    Report r{"T3", {"code", "convention", "el_pct", "el", "std_error"}, {}, std::move(provenance)};
    for (std::size_t i = 0; i < codes.size(); ++i)
        r.rows.push_back({codes[i], std::string(to_string(convention)), format_percent(el[i].mean),
                          format_fixed(el[i].mean, 6), format_fixed(el[i].std_error, 6)});
    return r;
}

Report tranche_report(const std::vector<TrancheCurve>& curves, std::vector<std::string> provenance) {
    Report r{"T4", {"kappa"}, {}, std::move(provenance)};
    if (curves.empty()) return r;
    for (const auto& c : curves) {
        r.columns.push_back(std::string(scheme_id(c.scheme)) + "_S");
        r.columns.push_back(std::string(scheme_id(c.scheme)) + "_J");
    }
    const std::size_t n_rows = curves.front().rows.size();
    for (std::size_t k = 0; k < n_rows; ++k) {
        std::vector<std::string> row = {format_short(curves.front().rows[k].kappa)};
        for (const auto& c : curves) {
            const TrancheRow& tr = c.rows.at(k);
            row.push_back(format_percent(tr.el_senior));
            row.push_back(tr.el_junior ? format_percent(*tr.el_junior) : "");
        }
        r.rows.push_back(std::move(row));
    }
    return r;
}

Report national_report(const std::string& code, double kappa, const ElEstimate& senior,
                       std::vector<std::string> provenance) {
    return {"NATIONAL",
            {"code", "kappa", "senior_el_pct", "senior_el", "std_error"},
            {{code, format_short(kappa), format_percent(senior.mean), format_fixed(senior.mean, 6),
              format_fixed(senior.std_error, 6)}},
            std::move(provenance)};
}

Report deal_report(const DealSheet& d) {
    return {"DEAL",
            {"item", "amount"},
            {{"debtor_purchase", format_fixed(d.debtor_purchase.units(), 2)},
             {"china_purchase", format_fixed(d.china_purchase.units(), 2)},
             {"senior_issued", format_fixed(d.senior_issued.units(), 2)},
             {"junior_issued", format_fixed(d.junior_issued.units(), 2)},
             {"subordination", format_short(d.subordination)},
             {"anchor_multiple", format_short(d.anchor_multiple)}},
            {}};
}

std::string deal_balance_sheet(const DealSheet& d) {
    auto amt = [](Money m) { return format_fixed(m.units(), 2); };
    std::vector<std::pair<std::string, std::string>> lines = {
        {"Chinese sovereign bonds " + amt(d.china_purchase), "Senior bonds " + amt(d.senior_issued)},
        {"Debtor states' sovereign bonds " + amt(d.debtor_purchase), "Junior bonds " + amt(d.junior_issued)},
        {"Total " + amt(d.total_assets()), "Total " + amt(d.total_liabilities())},
    };
    std::size_t width = std::string("Assets").size();
    for (const auto& [a, l] : lines) width = std::max(width, a.size());
    std::ostringstream out;
    auto line = [&](const std::string& a, const std::string& l) {
        out << a << std::string(width - a.size() + 2, ' ') << "| " << l << '\n';
    };
    out << "Securitization vehicle (subordination " << format_short(d.subordination) << ")\n";
    line("Assets", "Liabilities");
    out << std::string(width + 2, '-') << "+" << std::string(width + 2, '-') << '\n';
    for (const auto& [a, l] : lines) line(a, l);
    return out.str();
}

Report parse_report_csv(std::istream& in, std::string table_id) {
    Report r;
    r.table_id = std::move(table_id);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) == 0) {
            r.provenance.push_back(line.substr(2));
            continue;
        }
        if (line.empty()) continue;
        auto fields = detail::split_fields(line);
        if (header) {
            r.columns = std::move(fields);
            header = false;
        } else {
            if (fields.size() != r.columns.size())
                throw Error(ErrorCode::MalformedCsv, "row width " + std::to_string(fields.size()) + " != header width " +
                                                         std::to_string(r.columns.size()));
            r.rows.push_back(std::move(fields));
        }
    }
    if (header) throw Error(ErrorCode::MalformedCsv, "missing header row");
    return r;
}

}  // namespace tranchelab
