#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tranchelab/default_sim.hpp"
#include "tranchelab/pricing.hpp"

using namespace tranchelab;

namespace {

CountryParams country(std::string code, double pdn, double pdr, double lgdn, double lgdr) {
    CountryParams c;
    c.code = std::move(code);
    c.pd_normal = pdn;
    c.pd_recession = pdr;
    c.lgd_normal = lgdn;
    c.lgd_recession = lgdr;
    c.gdp_weight = 1.0;
    c.rank = 1;
    return c;
}

Scenario lone(const CountryParams& c, int maturity, LossConvention conv, std::int64_t runs, std::uint64_t seed) {
    Scenario s;
    s.countries = {c};
    s.bond.maturity_years = maturity;
    s.bond.loss_convention = conv;
    s.n_runs = runs;
    s.master_seed = seed;
    return s;
}

double rate() { return oracle::marginal_recession_rate(3.0, 1.9, 0.15); }

}  // namespace

TEST_CASE("loss fraction conventions") {
    BondSpec face{5, 0.10, LossConvention::FaceOnly};
    BondSpec coupon{5, 0.10, LossConvention::CouponInclusive};
    CHECK(loss_fraction(0, 0.5, face) == 0.0);
    CHECK(loss_fraction(3, 0.5, face) == 0.5);
    CHECK(loss_fraction(1, 1.0, coupon) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(loss_fraction(5, 0.5, coupon) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(loss_fraction(0, 1.0, coupon) == 0.0);
    CHECK_THROWS_AS(loss_fraction(6, 0.5, face), Error);
    CHECK_THROWS_AS(loss_fraction(-1, 0.5, face), Error);
}

TEST_CASE("certain first-year default in a normal year") {
    Scenario s = lone(country("AAA", 1.0, 1.0, 0.5, 0.9), 5, LossConvention::FaceOnly, 1, 3);
    s.factor.mu_f = 1e9;  // never a recession
    RandomStream rng = substream(3, 0);
    const PathOutcome out = simulate_cohort(s, rng);
    REQUIRE(out.size() == 1);
    CHECK(out.default_year[0] == 1);
    CHECK(out.lgd_applied[0] == 0.5);
    CHECK(out.loss_fraction[0] == 0.5);
}

TEST_CASE("zero default probabilities never default") {
    Scenario s = canonical_scenario();
    for (auto& c : s.countries) c.pd_normal = c.pd_recession = 0.0;
    s.n_runs = 2000;
    for (const auto& out : cohort_batch(s, 1))
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out.default_year[i] == 0);
            CHECK(out.loss_fraction[i] == 0.0);
        }
}

TEST_CASE("state-independent default frequency matches 1-(1-p)^M") {
    const double p = 0.04;
    const int m = 7;
    Scenario s = lone(country("AAA", p, p, 1.0, 1.0), m, LossConvention::FaceOnly, 40000, 17);
    const auto batch = cohort_batch(s, 1);
    double hits = 0;
    for (const auto& out : batch) hits += out.default_year[0] != 0;
    const double expect = 1.0 - std::pow(1.0 - p, m);
    const double se = std::sqrt(expect * (1 - expect) / batch.size());
    CHECK(std::fabs(hits / batch.size() - expect) < 4 * se);
}

TEST_CASE("default year distribution is geometric") {
    const CountryParams c = country("BOL", 0.075, 0.125, 1.0, 1.0);
    Scenario s = lone(c, 5, LossConvention::FaceOnly, 60000, 5);
    const auto batch = cohort_batch(s, 1);
    const auto h = oracle::hazard(rate(), c.pd_normal, c.pd_recession);
    for (int k = 1; k <= 5; ++k) {
        double n = 0;
        for (const auto& out : batch) n += out.default_year[0] == k;
        const double p = oracle::first_default_in(h, k);
        CHECK(std::fabs(n / batch.size() - p) < 4 * std::sqrt(p * (1 - p) / batch.size()));
    }
}

TEST_CASE("coupon-inclusive expected loss for the riskiest profile") {
    const CountryParams c = country("BOL", 0.075, 0.125, 1.0, 1.0);
    Scenario s = lone(c, 5, LossConvention::CouponInclusive, 100000, 1);
    const ElEstimate el = country_expected_losses(cohort_batch(s))[0];
    const double expect = oracle::expected_loss(oracle::hazard(rate(), 0.075, 0.125), 1.0, 1.0, 5, 0.10);
    CHECK(expect == doctest::Approx(0.4544).epsilon(1e-3));
    CHECK(std::fabs(el.mean - expect) < 4 * el.std_error);
}

TEST_CASE("face-only expected loss for the safest profile") {
    const Scenario base = canonical_scenario();
    CountryParams c = base.countries[index_of(base.countries, "CHN")];
    c.rank = 1;
    Scenario s = lone(c, 5, LossConvention::FaceOnly, 100000, 1);
    const ElEstimate el = country_expected_losses(cohort_batch(s))[0];
    const double expect =
        oracle::expected_loss(oracle::hazard(rate(), c.pd_normal, c.pd_recession), c.lgd_normal, c.lgd_recession, 5, -1);
    CHECK(std::fabs(expect - 0.024) < 0.001);
    CHECK(std::fabs(el.mean - expect) < 4 * el.std_error);
    CHECK(std::fabs(el.mean - 0.024) < 0.003);
}

TEST_CASE("applied lgd follows the panel state") {
    Scenario s = lone(country("AAA", 0.3, 0.3, 0.2, 0.7), 10, LossConvention::FaceOnly, 1, 0);
    s.countries.push_back(country("BBB", 0.3, 0.3, 0.2, 0.7));
    s.countries[1].rank = 2;
    for (std::uint64_t run = 0; run < 500; ++run) {
        RandomStream rng = substream(9, run);
        const CyclePanel panel = simulate_panel(s.factor, 10, 2, rng);
        const PathOutcome out = simulate_cohort(s, panel, rng);
        for (int i = 0; i < 2; ++i) {
            const int k = out.default_year[i];
            if (k == 0) {
                CHECK(out.loss_fraction[i] == 0.0);
                continue;
            }
            const double want = panel.state(k - 1, i) ? 0.7 : 0.2;
            CHECK(out.lgd_applied[i] == want);
            CHECK(out.loss_fraction[i] == want);
        }
    }
}

TEST_CASE("panel-first stream layout") {
    const Scenario s = canonical_scenario();
    RandomStream a = substream(21, 3);
    const PathOutcome whole = simulate_cohort(s, a);
    RandomStream b = substream(21, 3);
    const CyclePanel panel = simulate_panel(s.factor, s.bond.maturity_years, 18, b);
    const PathOutcome split = simulate_cohort(s, panel, b);
    CHECK(whole.default_year == split.default_year);
    CHECK(whole.loss_fraction == split.loss_fraction);
    CHECK(a.next() == b.next());
}

TEST_CASE("face-only loss never exceeds the recession lgd") {
    Scenario s = canonical_scenario();
    s.n_runs = 3000;
    for (const auto& out : cohort_batch(s))
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out.loss_fraction[i] >= 0.0);
            CHECK(out.loss_fraction[i] <= s.countries[i].lgd_recession);
        }
}

TEST_CASE("state-free parameters make the factor irrelevant") {
    Scenario s = canonical_scenario();
    for (auto& c : s.countries) {
        c.pd_recession = c.pd_normal;
        c.lgd_recession = c.lgd_normal;
    }
    s.n_runs = 2000;
    Scenario shifted = s;
    shifted.factor.mu_f = -1.0;
    shifted.factor.sigma_f = 0.4;
    CHECK(batch_digest(cohort_batch(s)) == batch_digest(cohort_batch(shifted)));
}

TEST_CASE("batches are reproducible and worker independent") {
    Scenario s = canonical_scenario();
    s.n_runs = 5000;
    s.master_seed = 77;
    const auto one = cohort_batch(s, 1);
    CHECK(batch_digest(one) == batch_digest(cohort_batch(s, 1)));
    CHECK(batch_digest(one) == batch_digest(cohort_batch(s, 3)));
    CHECK(batch_digest(one) == batch_digest(cohort_batch(s, 8)));
    s.master_seed = 78;
    CHECK(batch_digest(one) != batch_digest(cohort_batch(s, 1)));
}

TEST_CASE("run r uses substream r") {
    Scenario s = canonical_scenario();
    s.n_runs = 4;
    s.master_seed = 5;
    const auto batch = cohort_batch(s, 2);
    for (std::uint64_t r = 0; r < 4; ++r) {
        RandomStream rng = substream(5, r);
        CHECK(simulate_cohort(s, rng).loss_fraction == batch[r].loss_fraction);
    }
}

TEST_CASE("batch helpers validate") {
    Scenario s = canonical_scenario();
    s.n_runs = 0;
    CHECK_THROWS_AS(cohort_batch(s), Error);
    s.n_runs = 10;
    s.countries[0].pd_normal = 1.5;
    CHECK_THROWS_AS(cohort_batch(s), Error);
    s = canonical_scenario();
    s.n_runs = 10;
    const auto rs = cohort_result_set(s, 1);
    CHECK(rs.provenance.n_runs == 10);
    CHECK(rs.runs.size() == 10);
    CHECK(country_losses(rs.runs, 17).size() == 10);
}
