import os

import pytest

from extdelay import ExperimentConfig, run_experiment

WORKERS = min(4, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def halfrho_sweep_rows():
    """Shared sweep at rho^2 = 1/2 (0 dB): message sizes 6..14, 2e4 trials
    each. Used by the exponent-trend test and the slope acceptance check."""
    cfg = ExperimentConfig(
        snr_db=0.0,
        d_max=10,
        k_values=(6, 8, 10, 12, 14),
        estimators=("mie",),
        trials=20_000,
        master_seed=20260822,
        workers=WORKERS,
    )
    return run_experiment(cfg)
