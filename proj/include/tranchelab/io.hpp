#pragma once

// Data ingestion (growth panels, recession panels) and report emission.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tranchelab/cycle.hpp"
#include "tranchelab/engine.hpp"
#include "tranchelab/pricing.hpp"
#include "tranchelab/scenario.hpp"
#include "tranchelab/sync_stats.hpp"
#include "tranchelab/tranche.hpp"

namespace tranchelab {

/// Annual real GDP growth in percent, countries x years, with gaps.
struct GrowthPanel {
    std::vector<std::string> codes;
    std::vector<int> years;
    std::vector<std::vector<std::optional<double>>> growth_pct;  // [year][country]
};

struct IngestedGrowth {
    GrowthPanel growth;
    CyclePanel recessions;  // recession = growth < 0; gaps unobserved
};

/// CSV `code,year,growth_pct`; an empty growth cell marks a gap. Columns
/// follow `known` order (only codes present in the file); years span the
/// file's min..max. Throws MalformedCsv, UnknownCountryCode, DuplicateCell.
IngestedGrowth ingest_gdp_growth(std::istream& in, const std::vector<CountryParams>& known = canonical_dataset());

/// Header of country codes, one 0/1 row per year. Unobserved cells are empty.
void write_panel_csv(std::ostream& out, const CyclePanel& panel, const std::vector<std::string>& codes);

struct LabelledPanel {
    std::vector<std::string> codes;
    CyclePanel panel;
};
LabelledPanel read_panel_csv(std::istream& in);

/// Round-half-away-from-zero fixed formatting; never prints "-0".
std::string format_fixed(double value, int decimals);
/// Fraction as percent with one decimal: 0.13094 -> "13.1".
std::string format_percent(double fraction);
/// Shortest round-trip style for grid values: 0.05 -> "0.05", 0 -> "0".
std::string format_short(double value);

enum class ReportFormat { Csv, Markdown };
ReportFormat parse_format(std::string_view text);

struct Report {
    std::string table_id;  // T1, T3, T4, DEAL, NATIONAL, ...
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // pre-formatted cells, "" = empty
    std::vector<std::string> provenance;         // emitted as leading comment lines
};

/// CSV: `#`-prefixed provenance, header, rows. Markdown: provenance in an
/// HTML comment, then a pipe table. Throws InvalidParameter when a row's cell
/// count does not match the header.
std::string emit_report(const Report& report, ReportFormat format);

std::vector<std::string> provenance_lines(const Provenance& p, const std::vector<std::string>& extra = {});

Report sync_stats_report(const SyncStats& stats, std::vector<std::string> provenance = {});
Report cds_report(const std::vector<CdsQuote>& quotes, std::vector<std::string> provenance = {});
Report el_report(const std::vector<std::string>& codes, const std::vector<ElEstimate>& el, LossConvention convention,
                 std::vector<std::string> provenance = {});
Report tranche_report(const std::vector<TrancheCurve>& curves, std::vector<std::string> provenance = {});
Report national_report(const std::string& code, double kappa, const ElEstimate& senior,
                       std::vector<std::string> provenance = {});
Report deal_report(const DealSheet& deal);

/// Two-column balance sheet of the vehicle plus the anchor and debtor views.
std::string deal_balance_sheet(const DealSheet& deal);

/// Parses a report CSV back (comment lines skipped). Used for self-validation.
Report parse_report_csv(std::istream& in, std::string table_id = {});

}  // namespace tranchelab
