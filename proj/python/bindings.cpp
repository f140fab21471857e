#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tranchelab/cli.hpp"
#include "tranchelab/io.hpp"
#include "tranchelab/pricing.hpp"
#include "tranchelab/sync_stats.hpp"
#include "tranchelab/tranche.hpp"

namespace py = pybind11;
using namespace tranchelab;

namespace {

using Grid = std::vector<std::vector<std::optional<int>>>;

CyclePanel panel_from_grid(const Grid& rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptyPanel, "panel has no years");
    const int years = static_cast<int>(rows.size());
    const int countries = static_cast<int>(rows.front().size());
    CyclePanel panel(years, countries);
    for (int t = 0; t < years; ++t) {
        if (static_cast<int>(rows[t].size()) != countries)
            throw Error(ErrorCode::InvalidParameter, "ragged panel row " + std::to_string(t));
        for (int i = 0; i < countries; ++i) {
            if (rows[t][i]) panel.set_state(t, i, *rows[t][i] != 0);
            else panel.set_observed(t, i, false);
        }
    }
    return panel;
}

Grid grid_from_panel(const CyclePanel& panel) {
    Grid rows(panel.years(), std::vector<std::optional<int>>(panel.countries()));
    for (int t = 0; t < panel.years(); ++t)
        for (int i = 0; i < panel.countries(); ++i)
            if (panel.observed(t, i)) rows[t][i] = panel.state(t, i);
    return rows;
}

WeightScheme scheme_from(const py::object& scheme) {
    if (py::isinstance<py::str>(scheme)) return parse_scheme(scheme.cast<std::string>());
    return WeightScheme::custom_weights(scheme.cast<std::vector<std::pair<std::string, double>>>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sovereign bond pooling and tranching core";
    m.attr("__version__") = PROJECT_VERSION_STRING;

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    py::enum_<SyncMode>(m, "SyncMode")
        .value("FactorDriven", SyncMode::FactorDriven)
        .value("PerfectSync", SyncMode::PerfectSync);
    py::enum_<LossConvention>(m, "LossConvention")
        .value("FaceOnly", LossConvention::FaceOnly)
        .value("CouponInclusive", LossConvention::CouponInclusive);

    py::class_<CountryParams>(m, "CountryParams")
        .def(py::init<>())
        .def_readwrite("code", &CountryParams::code)
        .def_readwrite("pd_normal", &CountryParams::pd_normal)
        .def_readwrite("pd_recession", &CountryParams::pd_recession)
        .def_readwrite("lgd_normal", &CountryParams::lgd_normal)
        .def_readwrite("lgd_recession", &CountryParams::lgd_recession)
        .def_readwrite("gdp_weight", &CountryParams::gdp_weight)
        .def_readwrite("rank", &CountryParams::rank)
        .def_readwrite("is_china", &CountryParams::is_china)
        .def_readwrite("is_china_debtor", &CountryParams::is_china_debtor)
        .def("__repr__", [](const CountryParams& c) { return "<CountryParams " + c.code + ">"; });

    py::class_<FactorParams>(m, "FactorParams")
        .def(py::init<>())
        .def_readwrite("mu_f", &FactorParams::mu_f)
        .def_readwrite("sigma_f", &FactorParams::sigma_f)
        .def_readwrite("sigma_eps", &FactorParams::sigma_eps)
        .def_readwrite("sync_mode", &FactorParams::sync_mode);

    py::class_<BondSpec>(m, "BondSpec")
        .def(py::init<>())
        .def_readwrite("maturity_years", &BondSpec::maturity_years)
        .def_readwrite("coupon_rate", &BondSpec::coupon_rate)
        .def_readwrite("loss_convention", &BondSpec::loss_convention);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("countries", &Scenario::countries)
        .def_readwrite("factor", &Scenario::factor)
        .def_readwrite("bond", &Scenario::bond)
        .def_readwrite("n_runs", &Scenario::n_runs)
        .def_readwrite("master_seed", &Scenario::master_seed);

    py::class_<SyncStats>(m, "SyncStats")
        .def_readonly("recession_rate", &SyncStats::recession_rate)
        .def_readonly("concordance_rate", &SyncStats::concordance_rate)
        .def_readonly("pca_share", &SyncStats::pca_share)
        .def_readonly("pca_tetrachoric_share", &SyncStats::pca_tetrachoric_share);

    py::class_<CdsQuote>(m, "CdsQuote")
        .def_readonly("code", &CdsQuote::code)
        .def_readonly("cum_pd", &CdsQuote::cum_pd)
        .def_readonly("mean_lgd", &CdsQuote::mean_lgd)
        .def_readonly("hazard", &CdsQuote::hazard)
        .def_readonly("spread", &CdsQuote::spread)
        .def_readonly("defaults", &CdsQuote::defaults)
        .def_readonly("no_defaults", &CdsQuote::no_defaults);

    py::class_<ElEstimate>(m, "ElEstimate")
        .def_readonly("mean", &ElEstimate::mean)
        .def_readonly("std_error", &ElEstimate::std_error)
        .def_readonly("n_runs", &ElEstimate::n_runs);

    py::class_<TrancheRow>(m, "TrancheRow")
        .def_readonly("kappa", &TrancheRow::kappa)
        .def_readonly("el_pool", &TrancheRow::el_pool)
        .def_readonly("el_senior", &TrancheRow::el_senior)
        .def_readonly("se_senior", &TrancheRow::se_senior)
        .def_readonly("el_junior", &TrancheRow::el_junior)
        .def_readonly("se_junior", &TrancheRow::se_junior);

    py::class_<DealSheet>(m, "DealSheet")
        .def_property_readonly("debtor_purchase", [](const DealSheet& d) { return d.debtor_purchase.units(); })
        .def_property_readonly("china_purchase", [](const DealSheet& d) { return d.china_purchase.units(); })
        .def_property_readonly("senior_issued", [](const DealSheet& d) { return d.senior_issued.units(); })
        .def_property_readonly("junior_issued", [](const DealSheet& d) { return d.junior_issued.units(); })
        .def_property_readonly("total_assets_cents", [](const DealSheet& d) { return d.total_assets().cents; })
        .def_property_readonly("total_liabilities_cents",
                               [](const DealSheet& d) { return d.total_liabilities().cents; })
        .def_readonly("subordination", &DealSheet::subordination)
        .def_readonly("anchor_multiple", &DealSheet::anchor_multiple);

    m.def("canonical_dataset", &canonical_dataset);
    m.def("canonical_scenario", &canonical_scenario);
    m.def("scenario_digest", &scenario_digest);
    m.def("validate_scenario", [](const Scenario& s) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& v : validate_scenario(s)) out.emplace_back(std::string(to_string(v.kind)), v.field, v.reason);
        return out;
    });

    m.def(
        "simulate_panel",
        [](const FactorParams& f, int years, int countries, std::uint64_t seed, std::uint64_t index) {
            RandomStream rng = substream(seed, index);
            return grid_from_panel(simulate_panel(f, years, countries, rng));
        },
        py::arg("factor"), py::arg("years"), py::arg("countries"), py::arg("seed"), py::arg("index") = 0,
        "Rows are years, columns countries; 1 marks a recession.");
    m.def(
        "sync_stats", [](const Grid& rows) { return sync_stats(panel_from_grid(rows)); }, py::arg("panel"),
        "Statistics of a 0/1 panel; None marks a missing cell.");
    m.def("median_sync_stats", &median_sync_stats, py::arg("scenario"), py::arg("replications"),
          py::arg("years") = 34, py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());

    m.def("hazard_rate", &hazard_rate, py::arg("cum_pd"), py::arg("horizon_years"));
    m.def("cds_spread", &cds_spread, py::arg("hazard"), py::arg("mean_lgd"), py::arg("premium") = kResidualPremium);
    m.def("cds_pipeline", &cds_pipeline, py::arg("country"), py::arg("scenario"), py::arg("workers") = 0,
          py::arg("premium") = kResidualPremium, py::call_guard<py::gil_scoped_release>());
    m.def("cds_quotes", &cds_quotes, py::arg("scenario"), py::arg("workers") = 0,
          py::arg("premium") = kResidualPremium, py::call_guard<py::gil_scoped_release>());
    m.def(
        "expected_losses",
        [](const Scenario& s, int workers) { return country_expected_losses(cohort_batch(s, workers)); },
        py::arg("scenario"), py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());

    m.def(
        "tranche_losses",
        [](double pool, double kappa) {
            const TrancheSplit t = tranche_losses(pool, kappa);
            return std::make_pair(t.junior, t.senior);
        },
        py::arg("pool_loss"), py::arg("kappa"), "Returns (junior or None, senior).");
    m.def(
        "subordination_sweep",
        [](const Scenario& s, const py::object& scheme, std::vector<double> kappas, int workers) {
            const WeightScheme w = scheme_from(scheme);
            if (kappas.empty()) kappas = standard_kappas();
            py::gil_scoped_release release;
            return subordination_sweep(s, w, workers, kappas).rows;
        },
        py::arg("scenario"), py::arg("scheme") = "gdp", py::arg("kappas") = std::vector<double>{},
        py::arg("workers") = 0, "scheme: a scheme name or a list of (code, weight) pairs.");
    m.def("national_tranching", &national_tranching, py::arg("country"), py::arg("kappa"), py::arg("scenario"),
          py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("structure_deal", &structure_deal, py::arg("debt"), py::arg("kappa"), py::arg("multiple") = 2.0);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "tranchelab");
            std::ostringstream out, err;
            int status;
            {
                py::gil_scoped_release release;
                status = run_cli(args, out, err);
            }
            return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command in-process; returns (status, stdout, stderr).");
}
