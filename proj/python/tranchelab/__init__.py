"""Sovereign bond pooling and tranching: Python bindings over the C++ core."""

from ._core import (
    BondSpec,
    CdsQuote,
    CountryParams,
    DealSheet,
    ElEstimate,
    Error,
    FactorParams,
    LossConvention,
    Scenario,
    SyncMode,
    SyncStats,
    TrancheRow,
    __version__,
    canonical_dataset,
    canonical_scenario,
    cds_pipeline,
    cds_quotes,
    cds_spread,
    expected_losses,
    hazard_rate,
    median_sync_stats,
    national_tranching,
    run_cli,
    scenario_digest,
    simulate_panel,
    structure_deal,
    subordination_sweep,
    sync_stats,
    tranche_losses,
    validate_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
