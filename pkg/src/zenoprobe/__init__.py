"""Zeno and anti-Zeno probes of correlated polarisation noise.

Simulate a photon whose polarisation is kicked by correlated +-dphi jumps
and repeatedly filtered by a partially-selective polariser, compare the
ensemble-averaged survival with closed forms and spectral overlaps, and
invert measured decay back into the noise correlation.
"""
from .analytic import (
    RateSet,
    absorption_rate_gamma0,
    averaged_survival,
    averaged_v_survival,
    decay_rate_gamma,
    effective_measurement_rate,
    nonrandom_survival,
    random_survival,
    rate_equation_rhs,
    rates_for,
    validity_check,
    weak_measurement_survival,
    zeno_exponential,
)
from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    NonIdentifiableError,
    ResourceLimitError,
    SingularityError,
)
from .montecarlo import ExperimentConfig, SurvivalCurve, exact_average, run_ensemble, theta_sweep
from .noise import JumpSequence, empirical_correlation, generate_jump_sequence
from .polarization import (
    apply_block,
    measurement_matrix,
    realization_angles,
    rotation_matrix,
    trajectory_survival,
)
from .spectra import (
    bath_spectrum,
    control_spectrum,
    kk_decay_rate,
    lorentz_anticorrelated_approx,
    lorentz_correlated_approx,
)
from .spectroscopy import DecayFit, DiagnosisReport, Regime, diagnose, fit_decay_rate, infer_correlation

__version__ = "0.1.0"
