#include "tranchelab/cycle.hpp"

#include <algorithm>
#include <cmath>

namespace tranchelab {

CyclePanel::CyclePanel(int years, int countries)
    : years_(years),
      countries_(countries),
      states_(static_cast<std::size_t>(years) * static_cast<std::size_t>(countries), 0),
      observed_(states_.size(), 1) {
    if (years < 0 || countries < 0) throw Error(ErrorCode::InvalidParameter, "negative panel dimension");
}

bool CyclePanel::fully_observed() const noexcept {
    return std::all_of(observed_.begin(), observed_.end(), [](std::uint8_t m) { return m != 0; });
}

double recession_probability(double f, double eps) {
    if (!std::isfinite(f) || !std::isfinite(eps))
        throw Error(ErrorCode::NonFiniteInput, "factor draws must be finite");
    const double x = f + eps;
    double p;
    if (x >= 0.0) {
        const double e = std::exp(-x);
        p = e / (1.0 + e);
    } else {
        p = 1.0 / (1.0 + std::exp(x));
    }
    return std::clamp(p, 0.0, 1.0);
}

CyclePanel simulate_panel(const FactorParams& factor, int years, int n_countries, RandomStream& rng) {
    if (years < 1 || n_countries < 1)
        throw Error(ErrorCode::InvalidParameter, "panel needs at least one year and one country");
    if (!(factor.sigma_f >= 0.0) || !(factor.sigma_eps >= 0.0))
        throw Error(ErrorCode::InvalidParameter, "factor standard deviations must be >= 0");

    CyclePanel panel(years, n_countries);
    std::vector<double> eps(static_cast<std::size_t>(n_countries));
    for (int t = 0; t < years; ++t) {
        const double f = rng.normal(factor.mu_f, factor.sigma_f);
        if (factor.sync_mode == SyncMode::PerfectSync) {
            const bool rec = rng.uniform() < recession_probability(f, 0.0);
            for (int i = 0; i < n_countries; ++i) panel.set_state(t, i, rec);
            continue;
        }
        for (auto& e : eps) e = rng.normal(0.0, factor.sigma_eps);
        for (int i = 0; i < n_countries; ++i) {
            const double p = recession_probability(f, eps[static_cast<std::size_t>(i)]);
            panel.set_state(t, i, rng.uniform() < p);
        }
    }
    return panel;
}

}  // namespace tranchelab
