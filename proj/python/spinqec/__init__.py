"""Surface-code threshold simulator for mediated-exchange spin qubits."""

from ._core import (
    CSV_HEADER,
    WORKERS_ENV,
    SweepRow,
    __version__,
    cycle_time,
    dephasing_per_cycle,
    error_table_json,
    estimate,
    fit_threshold,
    format_csv,
    gate_error_pair,
    lattice_json,
    leakage_oscillation,
    mediated_exchange,
    parse_csv,
    residual_exchange_ratio,
    run_sweep,
    verify_cz_decompositions,
)

__all__ = [
    "CSV_HEADER",
    "WORKERS_ENV",
    "SweepRow",
    "__version__",
    "cycle_time",
    "dephasing_per_cycle",
    "error_table_json",
    "estimate",
    "fit_threshold",
    "format_csv",
    "gate_error_pair",
    "lattice_json",
    "leakage_oscillation",
    "mediated_exchange",
    "parse_csv",
    "residual_exchange_ratio",
    "run_sweep",
    "verify_cz_decompositions",
]
