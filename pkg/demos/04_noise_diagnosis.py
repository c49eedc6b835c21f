"""Infer the noise correlation from decay curves at several polariser settings.

The fitted decay rate at each theta is inverted to an estimate of C, the
estimates are pooled, and the sign of the pooled interval picks the regime.
"""
import math

from zenoprobe import ExperimentConfig, run_ensemble
from zenoprobe.montecarlo import derive_seed
from zenoprobe.spectroscopy import diagnose

DPHI = math.radians(4.0)
THETAS = (0.25, 0.5, 0.75, 1.0)

for c_true in (0.4, 0.0, -0.6):
    curves = [
        (th, run_ensemble(ExperimentConfig(DPHI, th, c_true, seed=derive_seed(11, th), n_realizations=10_000)))
        for th in THETAS
    ]
    rep = diagnose(curves, DPHI, 1.0)
    low, high = rep.c_interval
    print(f"C={c_true:+.1f}  C_hat={rep.c_hat:+.3f}  95% [{low:+.3f}, {high:+.3f}]  {rep.regime.value}")

# The regime is recovered reliably. The magnitude of C is pulled toward zero
# because seven blocks are too few for the asymptotic rate to hold; the
# intervals reflect sampling noise only and do not cover that bias.
