import math

import pytest

import tranchelab as tl


def small(runs=2000, maturity=5):
    s = tl.canonical_scenario()
    s.n_runs = runs
    s.master_seed = 1
    s.bond.maturity_years = maturity
    return s


def test_dataset():
    data = tl.canonical_dataset()
    assert len(data) == 18
    assert data[0].code == "ARE"
    assert math.isclose(sum(c.gdp_weight for c in data), 1.0, abs_tol=1e-9)
    assert tl.validate_scenario(tl.canonical_scenario()) == []


def test_validation_error_is_raised():
    s = small()
    s.n_runs = 0
    with pytest.raises(tl.Error):
        tl.expected_losses(s)


def test_closed_forms():
    assert tl.hazard_rate(0.0, 10.0) == 0.0
    assert math.isclose(tl.hazard_rate(1 - math.exp(-1), 10.0), 0.1, rel_tol=1e-14)
    assert math.isclose(tl.cds_spread(0.01, 0.5), 0.0065, rel_tol=1e-14)
    junior, senior = tl.tranche_losses(0.35, 0.25)
    assert junior == 1.0
    assert math.isclose(senior, 0.1 / 0.75, rel_tol=1e-14)
    assert tl.tranche_losses(0.2, 0.0) == (None, 0.2)


def test_panel_and_stats():
    f = tl.FactorParams()
    panel = tl.simulate_panel(f, 34, 18, seed=7)
    assert len(panel) == 34 and len(panel[0]) == 18
    st = tl.sync_stats(panel)
    assert 0.0 <= st.recession_rate <= 1.0
    panel[0][0] = None
    assert tl.sync_stats(panel).recession_rate >= 0.0
    f.sync_mode = tl.SyncMode.PerfectSync
    assert tl.sync_stats(tl.simulate_panel(f, 34, 18, seed=7)).concordance_rate == 1.0


def test_simulation_entry_points():
    s = small()
    el = tl.expected_losses(s)
    assert len(el) == 18 and all(e.mean >= 0 for e in el)
    quotes = tl.cds_quotes(s)
    assert quotes[1].code == "CHN" and quotes[1].spread > 0.0015
    rows = tl.subordination_sweep(s, "china-debtors")
    assert len(rows) == 11 and rows[0].el_junior is None
    custom = tl.subordination_sweep(s, [("CHN", 0.5), ("BOL", 0.5)], kappas=[0.0, 0.3])
    assert len(custom) == 2
    chn = tl.canonical_dataset()[1]
    assert tl.national_tranching(chn, 0.25, s).mean >= 0.0


def test_deal():
    d = tl.structure_deal(32e9, 0.5, 2.0)
    assert d.china_purchase == 64e9
    assert d.senior_issued == 48e9 and d.junior_issued == 48e9
    assert d.total_assets_cents == d.total_liabilities_cents


def test_cli_in_process():
    status, out, err = tl.run_cli(["deal", "--format", "csv"])
    assert status == 0 and err == ""
    assert "senior_issued,48000000000.00" in out
    status, _, err = tl.run_cli(["deal", "--nope"])
    assert status == 2 and err.startswith("error:")
