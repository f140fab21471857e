#include "tranchelab/pricing.hpp"

#include <cmath>

namespace tranchelab {

double hazard_rate(double cum_pd, double horizon_years) {
    if (!(cum_pd >= 0.0) || !(cum_pd < 1.0))
        throw Error(ErrorCode::PdOutOfRange, "cumulative PD must lie in [0,1), got " + std::to_string(cum_pd));
    if (!(horizon_years > 0.0)) throw Error(ErrorCode::InvalidParameter, "horizon must be positive");
    if (cum_pd == 0.0) return 0.0;
    return -std::log1p(-cum_pd) / horizon_years;
}

double cds_spread(double hazard, double mean_lgd, double premium_r) {
    if (!(hazard >= 0.0) || !(mean_lgd >= 0.0) || !(premium_r >= 0.0))
        throw Error(ErrorCode::InvalidParameter, "spread inputs must be non-negative");
    return hazard * mean_lgd + premium_r;
}

CdsQuote quote_from_batch(const std::vector<PathOutcome>& batch, std::size_t index, const std::string& code,
                          double horizon_years, double premium_r) {
    if (batch.empty()) throw Error(ErrorCode::EmptyInput, "empty batch");
    CdsQuote q;
    q.code = code;
    q.premium_r = premium_r;
    CompensatedSum lgd_sum;
    for (const auto& run : batch) {
        if (run.default_year.at(index) == 0) continue;
        ++q.defaults;
        lgd_sum.add(run.lgd_applied[index]);
    }
    q.cum_pd = static_cast<double>(q.defaults) / static_cast<double>(batch.size());
    if (q.defaults == 0) {
        q.no_defaults = true;
        q.spread = premium_r;
        return q;
    }
    q.mean_lgd = lgd_sum.value() / static_cast<double>(q.defaults);
    q.hazard = hazard_rate(q.cum_pd, horizon_years);
    q.spread = cds_spread(q.hazard, q.mean_lgd, premium_r);
    return q;
}

namespace {

Scenario cds_scenario(const Scenario& base) {
    Scenario s = base;
    s.bond.maturity_years = kCdsMaturityYears;
    s.bond.loss_convention = LossConvention::FaceOnly;
    return s;
}

}  // namespace

CdsQuote cds_pipeline(const CountryParams& country, const Scenario& scenario, int workers, double premium_r) {
    Scenario s = cds_scenario(scenario);
    CountryParams solo = country;
    solo.rank = 1;
    s.countries = {solo};
    const auto batch = cohort_batch(s, workers);
    return quote_from_batch(batch, 0, country.code, kCdsMaturityYears, premium_r);
}

std::vector<CdsQuote> cds_quotes(const Scenario& scenario, int workers, double premium_r) {
    const Scenario s = cds_scenario(scenario);
    const auto batch = cohort_batch(s, workers);
    std::vector<CdsQuote> out;
    for (std::size_t i = 0; i < s.countries.size(); ++i)
        out.push_back(quote_from_batch(batch, i, s.countries[i].code, kCdsMaturityYears, premium_r));
    return out;
}

ElEstimate expected_loss(std::span<const double> losses) {
    if (losses.empty()) throw Error(ErrorCode::EmptyInput, "expected loss of zero runs");
    const double n = static_cast<double>(losses.size());
    const double mean = compensated_sum(losses) / n;
    ElEstimate e;
    e.mean = mean;
    e.n_runs = static_cast<std::int64_t>(losses.size());
    if (losses.size() > 1) {
        CompensatedSum ss;
        for (double x : losses) ss.add((x - mean) * (x - mean));
        e.std_error = std::sqrt(ss.value() / (n - 1.0)) / std::sqrt(n);
    }
    return e;
}

std::vector<ElEstimate> country_expected_losses(const std::vector<PathOutcome>& batch) {
    if (batch.empty()) throw Error(ErrorCode::EmptyInput, "empty batch");
    std::vector<ElEstimate> out;
    for (std::size_t i = 0; i < batch.front().size(); ++i) out.push_back(expected_loss(country_losses(batch, i)));
    return out;
}

}  // namespace tranchelab
