#include "tranchelab/default_sim.hpp"

namespace tranchelab {

double loss_fraction(int default_year, double lgd, const BondSpec& bond) {
    if (default_year < 0 || default_year > bond.maturity_years)
        throw Error(ErrorCode::InvalidYear, "default year " + std::to_string(default_year) + " outside 0.." +
                                                std::to_string(bond.maturity_years));
    if (default_year == 0) return 0.0;
    if (bond.loss_convention == LossConvention::FaceOnly) return lgd;
    const int coupons_lost = bond.maturity_years - default_year + 1;
    return lgd * (1.0 + bond.coupon_rate * coupons_lost);
}

PathOutcome simulate_cohort(const Scenario& scenario, const CyclePanel& panel, RandomStream& rng) {
    const auto& countries = scenario.countries;
    const int maturity = scenario.bond.maturity_years;
    const std::size_t n = countries.size();
    if (panel.countries() != static_cast<int>(n) || panel.years() != maturity)
        throw Error(ErrorCode::InvalidParameter, "panel shape does not match scenario");

    PathOutcome out;
    out.default_year.assign(n, 0);
    out.lgd_applied.assign(n, 0.0);
    out.loss_fraction.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const CountryParams& c = countries[i];
        for (int t = 0; t < maturity; ++t) {
            const double u = rng.uniform();
            if (out.default_year[i] != 0) continue;
            const bool rec = panel.state(t, static_cast<int>(i));
            if (u < (rec ? c.pd_recession : c.pd_normal)) {
                out.default_year[i] = t + 1;
                out.lgd_applied[i] = rec ? c.lgd_recession : c.lgd_normal;
            }
        }
        out.loss_fraction[i] = loss_fraction(out.default_year[i], out.lgd_applied[i], scenario.bond);
    }
    return out;
}

PathOutcome simulate_cohort(const Scenario& scenario, RandomStream& rng) {
    const CyclePanel panel = simulate_panel(scenario.factor, scenario.bond.maturity_years,
                                            static_cast<int>(scenario.countries.size()), rng);
    return simulate_cohort(scenario, panel, rng);
}

ResultSet<PathOutcome> cohort_result_set(const Scenario& scenario, int workers) {
    require_valid(scenario);
    RandomPlan plan{scenario.master_seed, scenario.n_runs, workers};
    return run_parallel(plan, scenario_digest(scenario),
                        [&](RandomStream& rng, std::int64_t) { return simulate_cohort(scenario, rng); });
}

std::vector<PathOutcome> cohort_batch(const Scenario& scenario, int workers) {
    return cohort_result_set(scenario, workers).runs;
}

std::vector<double> country_losses(const std::vector<PathOutcome>& batch, std::size_t index) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (const auto& run : batch) out.push_back(run.loss_fraction.at(index));
    return out;
}

std::uint64_t batch_digest(const std::vector<PathOutcome>& batch) {
    std::vector<std::uint64_t> parts;
    parts.reserve(batch.size() * 3);
    for (const auto& run : batch) {
        parts.push_back(digest(std::span<const int>(run.default_year)));
        parts.push_back(digest(std::span<const double>(run.lgd_applied)));
        parts.push_back(digest(std::span<const double>(run.loss_fraction)));
    }
    return digest(std::span<const std::uint64_t>(parts));
}

}  // namespace tranchelab
