#include "tranchelab/tranche.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tranchelab {

WeightScheme parse_scheme(std::string_view name) {
    if (name == "gdp" || name == "gdp-based") return WeightScheme::gdp_based();
    if (name == "two-to-one") return WeightScheme::two_to_one();
    if (name == "china-debtors") return WeightScheme::china_debtors();
    if (name == "equal") return WeightScheme::equal();
    throw Error(ErrorCode::UnknownScheme, "unknown weighting scheme `" + std::string(name) + "`");
}

std::string_view scheme_id(const WeightScheme& scheme) {
    switch (scheme.kind) {
        case SchemeKind::GdpBased: return "gdp";
        case SchemeKind::TwoToOne: return "two-to-one";
        case SchemeKind::ChinaDebtors: return "china-debtors";
        case SchemeKind::Equal: return "equal";
        case SchemeKind::Custom: return "custom";
    }
    return "custom";
}

std::string_view scheme_label(const WeightScheme& scheme) {
    switch (scheme.kind) {
        case SchemeKind::GdpBased: return "GDP-based";
        case SchemeKind::TwoToOne: return "Two to one";
        case SchemeKind::ChinaDebtors: return "China and debtors";
        case SchemeKind::Equal: return "Equal weights";
        case SchemeKind::Custom: return "Custom";
    }
    return "Custom";
}

std::vector<WeightScheme> standard_schemes() {
    return {WeightScheme::gdp_based(), WeightScheme::two_to_one(), WeightScheme::china_debtors(),
            WeightScheme::equal()};
}

double PortfolioWeights::of(std::string_view code) const {
    for (std::size_t i = 0; i < codes.size(); ++i)
        if (codes[i] == code) return weights[i];
    throw Error(ErrorCode::UnknownCountryCode, "no weight for `" + std::string(code) + "`");
}

namespace {

void normalize(std::vector<double>& w, const char* what) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::MissingFlags, std::string(what) + " weights sum to zero");
    for (auto& x : w) x /= total;
}

}  // namespace

PortfolioWeights build_weights(const WeightScheme& scheme, const std::vector<CountryParams>& countries) {
    const std::size_t n = countries.size();
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "no countries");
    PortfolioWeights pw;
    for (const auto& c : countries) pw.codes.push_back(c.code);
    pw.weights.assign(n, 0.0);

    switch (scheme.kind) {
        case SchemeKind::GdpBased:
            for (std::size_t i = 0; i < n; ++i) pw.weights[i] = countries[i].gdp_weight;
            normalize(pw.weights, "GDP");
            break;
        case SchemeKind::TwoToOne: {
            std::vector<int> ranks;
            for (const auto& c : countries) ranks.push_back(c.rank);
            std::sort(ranks.begin(), ranks.end());
            for (std::size_t i = 0; i < n; ++i)
                if (ranks[i] != static_cast<int>(i) + 1)
                    throw Error(ErrorCode::MissingFlags, "two-to-one needs ranks forming 1..N");
            const int safer = static_cast<int>((n + 1) / 2);
            for (std::size_t i = 0; i < n; ++i) pw.weights[i] = countries[i].rank <= safer ? 0.074 : 0.037;
            normalize(pw.weights, "two-to-one");
            break;
        }
        case SchemeKind::ChinaDebtors: {
            const auto anchors = std::count_if(countries.begin(), countries.end(), [](const auto& c) { return c.is_china; });
            const auto debtors =
                std::count_if(countries.begin(), countries.end(), [](const auto& c) { return c.is_china_debtor && !c.is_china; });
            if (anchors != 1 || debtors == 0)
                throw Error(ErrorCode::MissingFlags, "china-debtors needs one is_china country and at least one debtor");
            for (std::size_t i = 0; i < n; ++i) {
                if (countries[i].is_china)
                    pw.weights[i] = 2.0 / 3.0;
                else if (countries[i].is_china_debtor)
                    pw.weights[i] = (1.0 / 3.0) / static_cast<double>(debtors);
            }
            break;
        }
        case SchemeKind::Equal:
            std::fill(pw.weights.begin(), pw.weights.end(), 1.0 / static_cast<double>(n));
            break;
        case SchemeKind::Custom: {
            double total = 0.0;
            for (const auto& [code, w] : scheme.custom) {
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw Error(ErrorCode::InvalidParameter, "custom weight for " + code + " must be non-negative");
                auto it = std::find(pw.codes.begin(), pw.codes.end(), code);
                if (it == pw.codes.end()) throw Error(ErrorCode::WeightMismatch, "custom weight for unknown country " + code);
                pw.weights[static_cast<std::size_t>(it - pw.codes.begin())] += w;
                total += w;
            }
            if (std::fabs(total - 1.0) > 1e-9)
                throw Error(ErrorCode::InvalidParameter, "custom weights must sum to 1");
            break;
        }
    }
    return pw;
}

double pool_loss(std::span<const double> weights, std::span<const double> losses) {
    if (weights.size() != losses.size())
        throw Error(ErrorCode::WeightMismatch, "weights cover " + std::to_string(weights.size()) + " countries, outcome has " +
                                                   std::to_string(losses.size()));
    CompensatedSum s;
    for (std::size_t i = 0; i < weights.size(); ++i) s.add(weights[i] * losses[i]);
    return s.value();
}

double pool_loss(const PortfolioWeights& weights, const PathOutcome& outcome) {
    return pool_loss(std::span<const double>(weights.weights), std::span<const double>(outcome.loss_fraction));
}

TrancheSplit tranche_losses(double pool, double kappa) {
    if (!(kappa >= 0.0) || !(kappa < 1.0))
        throw Error(ErrorCode::InvalidSubordination, "subordination must lie in [0,1)");
    if (!(pool >= 0.0)) throw Error(ErrorCode::InvalidParameter, "pool loss must be non-negative");
    if (kappa == 0.0) return {std::nullopt, pool};
    return {std::min(pool, kappa) / kappa, std::max(pool - kappa, 0.0) / (1.0 - kappa)};
}

std::vector<double> standard_kappas() {
    std::vector<double> k;
    for (int j = 0; j <= 10; ++j) k.push_back(j / 20.0);
    return k;
}

TrancheCurve sweep_from_batch(const std::vector<PathOutcome>& batch, const WeightScheme& scheme,
                              const std::vector<CountryParams>& countries, const std::vector<double>& kappas) {
    if (batch.empty()) throw Error(ErrorCode::EmptyInput, "empty batch");
    TrancheCurve curve;
    curve.scheme = scheme;
    curve.weights = build_weights(scheme, countries);

    std::vector<double> pool(batch.size());
    for (std::size_t r = 0; r < batch.size(); ++r) pool[r] = pool_loss(curve.weights, batch[r]);
    const ElEstimate el_pool = expected_loss(pool);

    std::vector<double> senior(batch.size()), junior(batch.size());
    for (double kappa : kappas) {
        TrancheRow row;
        row.kappa = kappa;
        row.el_pool = el_pool.mean;
        bool has_junior = false;
        for (std::size_t r = 0; r < batch.size(); ++r) {
            const TrancheSplit s = tranche_losses(pool[r], kappa);
            senior[r] = s.senior;
            has_junior = s.junior.has_value();
            junior[r] = s.junior.value_or(0.0);
        }
        const ElEstimate es = expected_loss(senior);
        row.el_senior = es.mean;
        row.se_senior = es.std_error;
        if (has_junior) {
            const ElEstimate ej = expected_loss(junior);
            row.el_junior = ej.mean;
            row.se_junior = ej.std_error;
        }
        curve.rows.push_back(row);
    }
    return curve;
}

std::vector<TrancheCurve> subordination_sweeps(const Scenario& scenario, const std::vector<WeightScheme>& schemes,
                                               int workers, const std::vector<double>& kappas) {
    const auto batch = cohort_batch(scenario, workers);
    std::vector<TrancheCurve> out;
    for (const auto& s : schemes) out.push_back(sweep_from_batch(batch, s, scenario.countries, kappas));
    return out;
}

TrancheCurve subordination_sweep(const Scenario& scenario, const WeightScheme& scheme, int workers,
                                 const std::vector<double>& kappas) {
    return subordination_sweeps(scenario, {scheme}, workers, kappas).front();
}

ElEstimate national_tranching(const CountryParams& country, double kappa, const Scenario& scenario, int workers) {
    if (!(kappa > 0.0) || !(kappa < 1.0))
        throw Error(ErrorCode::InvalidSubordination, "national tranching needs 0 < kappa < 1");
    Scenario s = scenario;
    CountryParams solo = country;
    solo.rank = 1;
    s.countries = {solo};
    const auto batch = cohort_batch(s, workers);
    std::vector<double> senior(batch.size());
    for (std::size_t r = 0; r < batch.size(); ++r) senior[r] = tranche_losses(batch[r].loss_fraction[0], kappa).senior;
    return expected_loss(senior);
}

Money money_from_units(double amount) {
    if (!std::isfinite(amount)) throw Error(ErrorCode::NonFiniteInput, "amount must be finite");
    return {std::llround(amount * 100.0)};
}

DealSheet structure_deal(double debt, double kappa, double anchor_multiple) {
    if (!(kappa >= 0.0) || !(kappa < 1.0))
        throw Error(ErrorCode::InvalidSubordination, "subordination must lie in [0,1)");
    if (!(debt >= 0.0)) throw Error(ErrorCode::InvalidParameter, "debt amount must be non-negative");
    if (!(anchor_multiple >= 0.0)) throw Error(ErrorCode::InvalidParameter, "anchor multiple must be non-negative");
    DealSheet d;
    d.subordination = kappa;
    d.anchor_multiple = anchor_multiple;
    d.debtor_purchase = money_from_units(debt);
    d.china_purchase = money_from_units(anchor_multiple * debt);
    const Money total = d.total_assets();
    d.junior_issued = {std::llround(kappa * static_cast<double>(total.cents))};
    d.senior_issued = {total.cents - d.junior_issued.cents};
    return d;
}

}  // namespace tranchelab
