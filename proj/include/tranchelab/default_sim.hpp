#pragma once

#include <cstdint>
#include <vector>

#include "tranchelab/cycle.hpp"
#include "tranchelab/engine.hpp"
#include "tranchelab/scenario.hpp"

namespace tranchelab {

/// One bond cohort: per-country default year (1-based, 0 = survived), the
/// LGD that applied, and the realized loss as a fraction of face.
struct PathOutcome {
    std::vector<int> default_year;
    std::vector<double> lgd_applied;
    std::vector<double> loss_fraction;

    std::size_t size() const noexcept { return default_year.size(); }
};

/// Loss per unit face for a default in year k (0 = none). Under
/// CouponInclusive the coupons from year k to maturity are lost as well.
double loss_fraction(int default_year, double lgd, const BondSpec& bond);

/// Simulates one cohort. Draws: the maturity x N recession panel first (see
/// simulate_panel), then one default uniform per country-year in country
/// order, then year order. All M x N default uniforms are drawn even after a
/// country defaults, so the stream layout does not depend on outcomes.
PathOutcome simulate_cohort(const Scenario& scenario, RandomStream& rng);

/// Same, reusing a caller-provided recession panel.
PathOutcome simulate_cohort(const Scenario& scenario, const CyclePanel& panel, RandomStream& rng);

/// n_runs cohorts; run r uses substream(master_seed, r).
std::vector<PathOutcome> cohort_batch(const Scenario& scenario, int workers = 0);

ResultSet<PathOutcome> cohort_result_set(const Scenario& scenario, int workers = 0);

/// Per-run loss of country `index`, in run order.
std::vector<double> country_losses(const std::vector<PathOutcome>& batch, std::size_t index);

/// Digest over every field of every run, in run order.
std::uint64_t batch_digest(const std::vector<PathOutcome>& batch);

}  // namespace tranchelab
