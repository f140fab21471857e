#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tranchelab/error.hpp"

namespace tranchelab {

/// Per-country default and loss parameters. All probabilities and loss
/// rates are fractions (0.0075 means 0.75% per annum).
struct CountryParams {
    std::string code;
    double pd_normal = 0.0;
    double pd_recession = 0.0;
    double lgd_normal = 0.0;
    double lgd_recession = 0.0;
    double gdp_weight = 0.0;
    int rank = 0;  // 1 = safest
    bool is_china = false;
    bool is_china_debtor = false;
};

enum class SyncMode { FactorDriven, PerfectSync };

/// Common-factor business-cycle parameters. Both sigmas are standard
/// deviations.
struct FactorParams {
    double mu_f = 3.0;
    double sigma_f = 1.9;
    double sigma_eps = 0.15;
    SyncMode sync_mode = SyncMode::FactorDriven;
};

enum class LossConvention {
    FaceOnly,         // loss = lgd
    CouponInclusive,  // loss = lgd * (1 + coupon * remaining coupons incl. default year)
};

struct BondSpec {
    int maturity_years = 10;
    double coupon_rate = 0.10;
    LossConvention loss_convention = LossConvention::FaceOnly;
};

struct Scenario {
    std::vector<CountryParams> countries;
    FactorParams factor;
    BondSpec bond;
    std::int64_t n_runs = 100000;
    std::uint64_t master_seed = 0;
};

struct Violation {
    ErrorCode kind;
    std::string field;
    std::string reason;
};

/// Returns every invariant violation found; an empty list means the scenario
/// is valid.
std::vector<Violation> validate_scenario(const Scenario& scenario);

/// Throws Error(InvalidParameter or DuplicateCountryCode) describing the
/// first violation, with all violations joined in the message.
const Scenario& require_valid(const Scenario& scenario);

/// The 18-country cross-section, ranked safest first, with fraction-valued
/// parameters and GDP weights renormalized to sum to one.
std::vector<CountryParams> canonical_dataset();

/// Canonical scenario: canonical dataset, default factor and bond settings.
Scenario canonical_scenario();

/// English display name for a canonical ISO-3 code, or the code itself.
std::string_view display_name(std::string_view code);

/// Index of `code` in `countries`; throws UnknownCountryCode.
std::size_t index_of(const std::vector<CountryParams>& countries, std::string_view code);

std::string_view to_string(SyncMode mode);
std::string_view to_string(LossConvention convention);
LossConvention parse_convention(std::string_view text);

// Country parameter file:
// code,pd_normal,pd_recession,lgd_normal,lgd_recession,gdp_weight,rank,is_china,is_china_debtor
std::vector<CountryParams> read_countries_csv(std::istream& in);
std::vector<CountryParams> read_countries_csv_file(const std::string& path);
void write_countries_csv(std::ostream& out, const std::vector<CountryParams>& countries);

/// Stable 64-bit digest of everything in the scenario that affects results.
std::uint64_t scenario_digest(const Scenario& scenario);

}  // namespace tranchelab
