#pragma once

// Pooling and tranching: portfolio weighting schemes, the senior/junior loss
// waterfall, subordination sweeps, single-country tranching and the deal
// structurer for a debt-swap vehicle.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tranchelab/default_sim.hpp"
#include "tranchelab/pricing.hpp"
#include "tranchelab/scenario.hpp"

namespace tranchelab {

enum class SchemeKind { GdpBased, TwoToOne, ChinaDebtors, Equal, Custom };

struct WeightScheme {
    SchemeKind kind = SchemeKind::GdpBased;
    std::vector<std::pair<std::string, double>> custom;  // Custom only

    static WeightScheme gdp_based() { return {SchemeKind::GdpBased, {}}; }
    static WeightScheme two_to_one() { return {SchemeKind::TwoToOne, {}}; }
    static WeightScheme china_debtors() { return {SchemeKind::ChinaDebtors, {}}; }
    static WeightScheme equal() { return {SchemeKind::Equal, {}}; }
    static WeightScheme custom_weights(std::vector<std::pair<std::string, double>> w) {
        return {SchemeKind::Custom, std::move(w)};
    }
};

/// "gdp", "two-to-one", "china-debtors", "equal". Throws UnknownScheme.
WeightScheme parse_scheme(std::string_view name);
std::string_view scheme_id(const WeightScheme& scheme);     // CLI identifier
std::string_view scheme_label(const WeightScheme& scheme);  // table heading

/// The four named schemes in table order.
std::vector<WeightScheme> standard_schemes();

/// Weights aligned with the country list they were built from.
struct PortfolioWeights {
    std::vector<std::string> codes;
    std::vector<double> weights;

    double of(std::string_view code) const;
};

/// GdpBased: renormalized gdp_weight. TwoToOne: ranks in the safer half get
/// 7.4%, the rest 3.7%, renormalized. ChinaDebtors: China 2/3, the remaining
/// third split evenly over the flagged debtors. Equal: 1/N.
PortfolioWeights build_weights(const WeightScheme& scheme, const std::vector<CountryParams>& countries);

/// Sum of w_i * loss_i. Throws WeightMismatch on a size mismatch.
double pool_loss(const PortfolioWeights& weights, const PathOutcome& outcome);
double pool_loss(std::span<const double> weights, std::span<const double> losses);

struct TrancheSplit {
    std::optional<double> junior;  // absent when kappa == 0
    double senior = 0.0;
};

/// Junior absorbs the first kappa of pool loss. Throws InvalidSubordination
/// unless 0 <= kappa < 1.
TrancheSplit tranche_losses(double pool_loss, double kappa);

struct TrancheRow {
    double kappa = 0.0;
    double el_pool = 0.0;
    double el_senior = 0.0;
    double se_senior = 0.0;
    std::optional<double> el_junior;
    std::optional<double> se_junior;
};

struct TrancheCurve {
    WeightScheme scheme;
    PortfolioWeights weights;
    std::vector<TrancheRow> rows;
};

/// 0, 0.05, ..., 0.50.
std::vector<double> standard_kappas();

/// Sweep over an existing batch; every kappa row sees the same paths.
TrancheCurve sweep_from_batch(const std::vector<PathOutcome>& batch, const WeightScheme& scheme,
                              const std::vector<CountryParams>& countries,
                              const std::vector<double>& kappas = standard_kappas());

TrancheCurve subordination_sweep(const Scenario& scenario, const WeightScheme& scheme, int workers = 0,
                                 const std::vector<double>& kappas = standard_kappas());

/// All schemes over one shared batch.
std::vector<TrancheCurve> subordination_sweeps(const Scenario& scenario, const std::vector<WeightScheme>& schemes,
                                               int workers = 0,
                                               const std::vector<double>& kappas = standard_kappas());

/// Senior expected loss when a single country's bonds are tranched alone.
ElEstimate national_tranching(const CountryParams& country, double kappa, const Scenario& scenario, int workers = 0);

/// Whole cents.
struct Money {
    std::int64_t cents = 0;
    double units() const noexcept { return static_cast<double>(cents) / 100.0; }
    friend Money operator+(Money a, Money b) noexcept { return {a.cents + b.cents}; }
    friend bool operator==(Money, Money) = default;
};

Money money_from_units(double amount);

struct DealSheet {
    Money debtor_purchase;
    Money china_purchase;
    Money senior_issued;
    Money junior_issued;
    double subordination = 0.0;
    double anchor_multiple = 0.0;

    Money total_assets() const noexcept { return debtor_purchase + china_purchase; }
    Money total_liabilities() const noexcept { return senior_issued + junior_issued; }
};

/// The vehicle buys `debt` of debtor bonds and multiple * debt of anchor
/// (China) bonds, and funds it with junior = kappa * total and senior = the
/// rest, so assets equal liabilities to the cent.
DealSheet structure_deal(double debt, double kappa, double anchor_multiple);

}  // namespace tranchelab
