#include "tranchelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>

#include "csv.hpp"

namespace tranchelab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::DuplicateCountryCode: return "DuplicateCountryCode";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::EmptyPanel: return "EmptyPanel";
        case ErrorCode::TooFewCountries: return "TooFewCountries";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::DegenerateMargins: return "DegenerateMargins";
        case ErrorCode::InvalidYear: return "InvalidYear";
        case ErrorCode::PdOutOfRange: return "PdOutOfRange";
        case ErrorCode::NoDefaults: return "NoDefaults";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MissingFlags: return "MissingFlags";
        case ErrorCode::UnknownScheme: return "UnknownScheme";
        case ErrorCode::WeightMismatch: return "WeightMismatch";
        case ErrorCode::InvalidSubordination: return "InvalidSubordination";
        case ErrorCode::EmptyPlan: return "EmptyPlan";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::UnknownCountryCode: return "UnknownCountryCode";
        case ErrorCode::DuplicateCell: return "DuplicateCell";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Unknown";
}

namespace {

struct Row {
    const char* code;
    const char* name;
    double pd1_pct;   // printed in percent
    double pd2;       // printed as a fraction
    double lgd1_pct;
    double lgd2_pct;
    double weight_pct;
    bool debtor;
};

// Safest first. PD1 and LGD columns are percent, the recession PD column is a
// fraction; see canonical_dataset().
constexpr Row kRows[] = {
    {"ARE", "UAE", 0.75, 0.035, 32.5, 65.0, 1.5, false},
    {"CHN", "China", 0.75, 0.035, 32.5, 65.0, 57.2, false},
    {"THA", "Thailand", 1.0, 0.0375, 32.5, 65.0, 1.7, false},
    {"MYS", "Malaysia", 1.0, 0.0375, 32.5, 65.0, 1.3, false},
    {"IND", "India", 1.5, 0.0375, 32.5, 65.0, 10.8, false},
    {"SAU", "Saudi Arabia", 2.0, 0.045, 32.5, 65.0, 3.5, false},
    {"IDN", "Indonesia", 2.0, 0.0475, 37.5, 75.0, 4.1, true},
    {"KAZ", "Kazakhstan", 2.0, 0.05, 37.5, 75.0, 0.7, true},
    {"RUS", "Russia", 2.5, 0.05, 35.0, 70.0, 6.3, false},
    {"BRA", "Brazil", 3.0, 0.07, 50.0, 80.0, 6.1, true},
    {"ZAF", "South Africa", 3.0, 0.07, 50.0, 80.0, 1.3, true},
    {"UZB", "Uzbekistan", 3.0, 0.0725, 60.0, 80.0, 0.3, true},
    {"EGY", "Egypt", 3.0, 0.0725, 75.0, 100.0, 1.3, true},
    {"IRN", "Iran", 3.5, 0.075, 75.0, 100.0, 1.3, false},
    {"NGA", "Nigeria", 3.5, 0.0775, 75.0, 100.0, 1.7, true},
    {"UGA", "Uganda", 5.0, 0.1, 75.0, 100.0, 0.1, true},
    {"ETH", "Ethiopia", 5.5, 0.1, 100.0, 100.0, 0.4, true},
    {"BOL", "Bolivia", 7.5, 0.125, 100.0, 100.0, 0.2, true},
};

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<CountryParams> canonical_dataset() {
    double total = 0.0;
    for (const auto& r : kRows) total += r.weight_pct;
    std::vector<CountryParams> out;
    out.reserve(std::size(kRows));
    int rank = 1;
    for (const auto& r : kRows) {
        CountryParams c;
        c.code = r.code;
        c.pd_normal = r.pd1_pct / 100.0;
        c.pd_recession = r.pd2;
        c.lgd_normal = r.lgd1_pct / 100.0;
        c.lgd_recession = r.lgd2_pct / 100.0;
        c.gdp_weight = r.weight_pct / total;
        c.rank = rank++;
        c.is_china = c.code == "CHN";
        c.is_china_debtor = r.debtor;
        out.push_back(std::move(c));
    }
    return out;
}

Scenario canonical_scenario() {
    Scenario s;
    s.countries = canonical_dataset();
    return s;
}

std::string_view display_name(std::string_view code) {
    for (const auto& r : kRows)
        if (code == r.code) return r.name;
    return code;
}

std::size_t index_of(const std::vector<CountryParams>& countries, std::string_view code) {
    for (std::size_t i = 0; i < countries.size(); ++i)
        if (countries[i].code == code) return i;
    // Accept display names as an alias for the canonical codes.
    for (const auto& r : kRows)
        if (code == r.name)
            for (std::size_t i = 0; i < countries.size(); ++i)
                if (countries[i].code == r.code) return i;
    throw Error(ErrorCode::UnknownCountryCode, "no country `" + std::string(code) + "`");
}

std::vector<Violation> validate_scenario(const Scenario& s) {
    std::vector<Violation> v;
    auto bad = [&](std::string field, std::string reason) {
        v.push_back({ErrorCode::InvalidParameter, std::move(field), std::move(reason)});
    };
    if (s.countries.empty()) bad("countries", "at least one country required");
    std::set<std::string> seen;
    for (const auto& c : s.countries) {
        const std::string p = "countries[" + c.code + "].";
        if (c.code.empty()) bad(p + "code", "must be non-empty");
        if (!seen.insert(c.code).second)
            v.push_back({ErrorCode::DuplicateCountryCode, p + "code", "duplicate code " + c.code});
        const std::pair<const char*, double> fractions[] = {
            {"pd_normal", c.pd_normal},   {"pd_recession", c.pd_recession},
            {"lgd_normal", c.lgd_normal}, {"lgd_recession", c.lgd_recession},
            {"gdp_weight", c.gdp_weight},
        };
        for (const auto& [name, value] : fractions)
            if (!in_unit(value)) bad(p + name, "must lie in [0,1], got " + fmt17(value));
        if (c.pd_recession < c.pd_normal) bad(p + "pd_recession", "must be >= pd_normal");
        if (c.lgd_recession < c.lgd_normal) bad(p + "lgd_recession", "must be >= lgd_normal");
        if (c.rank < 1 || c.rank > static_cast<int>(s.countries.size()))
            bad(p + "rank", "must lie in 1..N");
    }
    if (!(std::isfinite(s.factor.mu_f))) bad("factor.mu_f", "must be finite");
    if (!(s.factor.sigma_f >= 0.0) || !std::isfinite(s.factor.sigma_f)) bad("factor.sigma_f", "must be >= 0");
    if (!(s.factor.sigma_eps >= 0.0) || !std::isfinite(s.factor.sigma_eps)) bad("factor.sigma_eps", "must be >= 0");
    if (s.bond.maturity_years < 1) bad("bond.maturity_years", "must be >= 1");
    if (!(s.bond.coupon_rate >= 0.0) || !std::isfinite(s.bond.coupon_rate)) bad("bond.coupon_rate", "must be >= 0");
    if (s.n_runs < 1) bad("n_runs", "must be >= 1");
    return v;
}

const Scenario& require_valid(const Scenario& scenario) {
    auto v = validate_scenario(scenario);
    if (v.empty()) return scenario;
    std::string msg;
    for (const auto& x : v) msg += (msg.empty() ? "" : "; ") + x.field + ": " + x.reason;
    throw Error(v.front().kind, msg);
}

std::string_view to_string(SyncMode mode) {
    return mode == SyncMode::PerfectSync ? "perfect-sync" : "factor-driven";
}

std::string_view to_string(LossConvention convention) {
    return convention == LossConvention::CouponInclusive ? "coupon" : "face";
}

LossConvention parse_convention(std::string_view text) {
    if (text == "face" || text == "face-only") return LossConvention::FaceOnly;
    if (text == "coupon" || text == "coupon-inclusive") return LossConvention::CouponInclusive;
    throw Error(ErrorCode::InvalidParameter, "unknown loss convention `" + std::string(text) + "`");
}

static const std::vector<std::string> kCountryHeader = {
    "code", "pd_normal", "pd_recession", "lgd_normal", "lgd_recession",
    "gdp_weight", "rank", "is_china", "is_china_debtor"};

std::vector<CountryParams> read_countries_csv(std::istream& in) {
    auto rows = detail::read_rows(in);
    detail::expect_header(rows, kCountryHeader);
    std::vector<CountryParams> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        detail::expect_width(row, kCountryHeader.size());
        CountryParams c;
        c.code = row.fields[0];
        c.pd_normal = detail::parse_double(row, 1);
        c.pd_recession = detail::parse_double(row, 2);
        c.lgd_normal = detail::parse_double(row, 3);
        c.lgd_recession = detail::parse_double(row, 4);
        c.gdp_weight = detail::parse_double(row, 5);
        c.rank = static_cast<int>(detail::parse_int(row, 6));
        c.is_china = detail::parse_bool01(row, 7);
        c.is_china_debtor = detail::parse_bool01(row, 8);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CountryParams> read_countries_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedCsv, "cannot open `" + path + "`");
    return read_countries_csv(in);
}

void write_countries_csv(std::ostream& out, const std::vector<CountryParams>& countries) {
    for (std::size_t i = 0; i < kCountryHeader.size(); ++i) out << (i ? "," : "") << kCountryHeader[i];
    out << '\n';
    for (const auto& c : countries) {
        out << c.code << ',' << fmt17(c.pd_normal) << ',' << fmt17(c.pd_recession) << ','
            << fmt17(c.lgd_normal) << ',' << fmt17(c.lgd_recession) << ',' << fmt17(c.gdp_weight)
            << ',' << c.rank << ',' << (c.is_china ? 1 : 0) << ',' << (c.is_china_debtor ? 1 : 0)
            << '\n';
    }
}

std::uint64_t scenario_digest(const Scenario& s) {
    detail::Fnv1a h;
    for (const auto& c : s.countries) {
        h.add(c.code);
        for (double x : {c.pd_normal, c.pd_recession, c.lgd_normal, c.lgd_recession, c.gdp_weight})
            h.add(fmt17(x));
        h.add(std::to_string(c.rank) + (c.is_china ? "C" : "c") + (c.is_china_debtor ? "D" : "d"));
        h.add(";");
    }
    h.add(fmt17(s.factor.mu_f));
    h.add(fmt17(s.factor.sigma_f));
    h.add(fmt17(s.factor.sigma_eps));
    h.add(to_string(s.factor.sync_mode));
    h.add(std::to_string(s.bond.maturity_years));
    h.add(fmt17(s.bond.coupon_rate));
    h.add(to_string(s.bond.loss_convention));
    h.add(std::to_string(s.n_runs));
    h.add(std::to_string(s.master_seed));
    return h.value();
}

}  // namespace tranchelab
