#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tranchelab/default_sim.hpp"
#include "tranchelab/scenario.hpp"

namespace tranchelab {

inline constexpr double kResidualPremium = 0.0015;  // counterparty and liquidity premium, per year
inline constexpr int kCdsMaturityYears = 10;

struct CdsQuote {
    std::string code;
    double cum_pd = 0.0;    // fraction of runs with a default before maturity
    double mean_lgd = 0.0;  // mean realized face LGD over defaulting runs
    double hazard = 0.0;    // per year
    double spread = 0.0;    // per year, fraction
    double premium_r = kResidualPremium;
    std::int64_t defaults = 0;
    bool no_defaults = false;  // mean_lgd undefined; spread reported as premium_r
};

struct ElEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_runs = 0;
};

/// -ln(1 - cum_pd) / horizon. Throws PdOutOfRange for cum_pd outside [0,1).
double hazard_rate(double cum_pd, double horizon_years);

/// hazard * lgd + premium.
double cds_spread(double hazard, double mean_lgd, double premium_r = kResidualPremium);

/// Quote for the country at `index` from an existing batch.
CdsQuote quote_from_batch(const std::vector<PathOutcome>& batch, std::size_t index, const std::string& code,
                          double horizon_years, double premium_r = kResidualPremium);

/// Simulates the country alone over 10-year cohorts (scenario factor, runs and
/// seed) and quotes its spread.
CdsQuote cds_pipeline(const CountryParams& country, const Scenario& scenario, int workers = 0,
                      double premium_r = kResidualPremium);

/// Quotes for every country from one shared 10-year batch.
std::vector<CdsQuote> cds_quotes(const Scenario& scenario, int workers = 0, double premium_r = kResidualPremium);

/// Sample mean and standard error (sample sd / sqrt(n)); both sums are
/// compensated and run in index order. Throws EmptyInput.
ElEstimate expected_loss(std::span<const double> losses);

/// Per-country expected loss from a batch, in country order.
std::vector<ElEstimate> country_expected_losses(const std::vector<PathOutcome>& batch);

}  // namespace tranchelab
