#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tranchelab/random.hpp"
#include "tranchelab/scenario.hpp"

namespace tranchelab {

/// years x countries recession indicators, row-major by year. Cells may be
/// marked unobserved (empirical data with gaps); simulated panels are fully
/// observed.
class CyclePanel {
public:
    CyclePanel() = default;
    CyclePanel(int years, int countries);

    int years() const noexcept { return years_; }
    int countries() const noexcept { return countries_; }

    bool state(int year, int country) const { return states_[at(year, country)] != 0; }
    void set_state(int year, int country, bool recession) { states_[at(year, country)] = recession ? 1 : 0; }

    bool observed(int year, int country) const { return observed_[at(year, country)] != 0; }
    /// Masking a cell also clears its state.
    void set_observed(int year, int country, bool observed) {
        observed_[at(year, country)] = observed ? 1 : 0;
        if (!observed) states_[at(year, country)] = 0;
    }

    bool fully_observed() const noexcept;

    /// Row of year `t`; one byte per country, 0/1.
    const std::uint8_t* row(int year) const { return states_.data() + static_cast<std::size_t>(year) * countries_; }

    const std::vector<std::uint8_t>& raw_states() const noexcept { return states_; }

    bool operator==(const CyclePanel&) const = default;

private:
    std::size_t at(int year, int country) const {
        return static_cast<std::size_t>(year) * static_cast<std::size_t>(countries_) + static_cast<std::size_t>(country);
    }

    int years_ = 0;
    int countries_ = 0;
    std::vector<std::uint8_t> states_;
    std::vector<std::uint8_t> observed_;
};

/// 1 / (1 + exp(f + eps)), evaluated without overflow. Throws NonFiniteInput.
double recession_probability(double f, double eps);

/// Draw order per year: F_t, then eps for each country in order, then one
/// indicator uniform per country in order. PerfectSync draws F_t and a single
/// uniform per year and copies the indicator across the row.
CyclePanel simulate_panel(const FactorParams& factor, int years, int n_countries, RandomStream& rng);

}  // namespace tranchelab
