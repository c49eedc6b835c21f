"""Noise diagnostics: fit decay curves and invert them for the correlation C.

The forward model maps ``C`` to the polarisation decay rate
``gamma = (1 + C theta)/(1 - C theta) * dphi^2 / tau``. With
``r = gamma * tau / dphi^2`` this inverts to ``C = (r - 1) / (theta (r + 1))``,
and uncertainties are carried through by the delta method.
"""
from dataclasses import dataclass, field
import enum
import logging
import math

import numpy as np
from scipy import optimize, stats

from . import analytic
from .errors import FitError, NonIdentifiableError
from .polarization import check_theta

LOGGER = logging.getLogger(__name__)

RESOLUTION = 0.1
CONFIDENCE = 0.95


class FitModel(str, enum.Enum):
    LOG_LINEAR = "log_linear"
    FULL_MODEL = "full_model"


class Regime(str, enum.Enum):
    QZE = "QZE"
    AZE = "AZE"
    MARKOVIAN = "Markovian"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DecayFit:
    gamma_hat: float
    gamma_stderr: float
    model: FitModel
    residual_norm: float
    weighted: bool = True


@dataclass(frozen=True)
class DiagnosisReport:
    c_hat: float
    c_interval: tuple
    regime: Regime
    validity_margin: float
    c_stderr: float = 0.0
    clamped: bool = False
    confidence: float = CONFIDENCE
    per_theta: tuple = field(default=())

    def to_dict(self):
        return {
            "c_hat": self.c_hat,
            "c_low": self.c_interval[0],
            "c_high": self.c_interval[1],
            "c_stderr": self.c_stderr,
            "regime": self.regime.value,
            "validity_margin": self.validity_margin,
            "clamped": self.clamped,
            "confidence": self.confidence,
        }


def _sigmas(curve):
    """Standard errors of the block means, or None when all are zero."""
    se = np.asarray(curve.std, dtype=float) / math.sqrt(curve.n_realizations)
    if np.all(se == 0.0):
        return None
    # Blocks with zero spread are known exactly; give them the smallest
    # positive error so they dominate without dividing by zero.
    floor = se[se > 0].min()
    return np.where(se > 0, se, floor)


def _sandwich(a, curve, scale):
    """Variance of the linear statistic ``a @ mean`` under the curve covariance."""
    if curve.cov is None:
        return None
    cov = np.asarray(curve.cov) / curve.n_realizations
    return float(a @ (scale[:, None] * cov * scale[None, :]) @ a)


def _fit_log_linear(curve, t, y):
    if np.any(y <= 0):
        raise FitError("log_linear needs strictly positive means; use model='full_model'")
    ly = np.log(y)
    sig = _sigmas(curve)
    if sig is None:
        w = np.ones_like(t)
    else:
        w = (y / sig) ** 2
    denom = np.sum(w * t * t)
    gamma = -float(np.sum(w * t * ly) / denom)
    resid = ly + gamma * t
    if sig is None:
        dof = max(len(t) - 1, 1)
        stderr = math.sqrt(float(np.sum(resid**2)) / dof / float(np.sum(t * t)))
        return DecayFit(gamma, stderr, FitModel.LOG_LINEAR, float(np.linalg.norm(resid)), weighted=False)
    a = -w * t / denom
    var = _sandwich(a, curve, 1.0 / y)
    if var is None:
        var = 1.0 / denom
    return DecayFit(gamma, math.sqrt(max(var, 0.0)), FitModel.LOG_LINEAR, float(np.linalg.norm(resid / (sig / y))))


def _full_model(t, gamma, gamma0):
    return analytic.averaged_survival(t, analytic.RateSet.from_rates(gamma, gamma0))


def _full_model_slope(t, gamma, gamma0, h=None):
    h = h or max(abs(gamma) * 1e-6, 1e-12)
    lo = max(gamma - h, 0.0)
    return (_full_model(t, gamma + h, gamma0) - _full_model(t, lo, gamma0)) / (gamma + h - lo)


def _fit_full_model(curve, t, y, theta, tau, convention):
    if theta < analytic.PROJECTIVE_THETA:
        gamma0 = math.inf
    else:
        gamma0 = analytic.absorption_rate_gamma0(theta, tau, convention)

    def resid(g):
        return y - _full_model(t, g[0], gamma0)

    # Starting point from the late-time slope of the log curve.
    pos = y > 0
    g_start = max(-np.log(y[pos][-1]) / t[pos][-1], 1e-12) if np.any(pos) else 1.0
    sol = optimize.least_squares(resid, x0=[g_start], bounds=([0.0], [np.inf]), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    gamma = float(sol.x[0])
    r = sol.fun
    jac = _full_model_slope(t, gamma, gamma0)
    info = float(jac @ jac)
    if info == 0.0:
        raise FitError("decay curve carries no information on gamma")
    sig = _sigmas(curve)
    if sig is None:
        dof = max(len(t) - 1, 1)
        stderr = math.sqrt(float(r @ r) / dof / info)
        return DecayFit(gamma, stderr, FitModel.FULL_MODEL, float(np.linalg.norm(r)), weighted=False)
    # Linearised estimator gamma ~ a @ mean, error propagated from the data.
    a = jac / info
    var = _sandwich(a, curve, np.ones_like(t))
    if var is None:
        var = float(np.sum((a * sig) ** 2))
    return DecayFit(gamma, math.sqrt(max(var, 0.0)), FitModel.FULL_MODEL, float(np.linalg.norm(r)), weighted=False)


def fit_decay_rate(curve, theta, tau, model=FitModel.FULL_MODEL, convention=analytic.DEFAULT_GAMMA0_CONVENTION):
    """Fit the polarisation decay rate of a survival curve.

    Parameters
    ----------
    curve : SurvivalCurve
    theta : float
        Filter strength the curve was recorded at.
    tau : float
        Block spacing (only used by ``full_model`` through the absorption rate).
    model : {"log_linear", "full_model"}
        ``log_linear`` regresses ``ln(mean)`` on ``t`` through the origin.
        ``full_model`` fits the rate-equation solution by ordinary least
        squares, with the absorption rate fixed by ``theta`` and ``tau``.

    Returns
    -------
    DecayFit
        When every ``std`` is zero the standard error comes from the
        residual scatter (and ``log_linear`` falls back to an unweighted fit,
        flagged by ``weighted=False``). Otherwise it is propagated from the
        standard errors of the block means, including the covariance between
        blocks when the curve carries one.
    """
    model = FitModel(model)
    theta = check_theta(theta)
    t = np.asarray(curve.times, dtype=float)
    y = np.asarray(curve.mean, dtype=float)
    if len(t) < 2:
        raise FitError("need at least two points to fit a decay")
    if model is FitModel.LOG_LINEAR:
        return _fit_log_linear(curve, t, y)
    return _fit_full_model(curve, t, y, theta, tau, convention)


def _interval(c_hat, stderr, confidence):
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    return c_hat - z * stderr, c_hat + z * stderr


def classify(interval, resolution=RESOLUTION):
    low, high = interval
    if low > 0.0:
        return Regime.QZE
    if high < 0.0:
        return Regime.AZE
    if (high - low) / 2.0 < resolution:
        return Regime.MARKOVIAN
    return Regime.INDETERMINATE


def _finish(c_raw, stderr, thetas, delta_phi, confidence, resolution, per_theta=()):
    clamped = not -1.0 <= c_raw <= 1.0
    c_hat = min(max(c_raw, -1.0), 1.0)
    low, high = _interval(c_raw, stderr, confidence)
    regime = classify((low, high), resolution)
    low, high = max(low, -1.0), min(high, 1.0)
    low, high = min(low, c_hat), max(high, c_hat)
    margin = max(analytic.validity_check(delta_phi, c_hat, th)[1] for th in thetas)
    return DiagnosisReport(
        c_hat=c_hat,
        c_interval=(low, high),
        regime=regime,
        validity_margin=margin,
        c_stderr=stderr,
        clamped=clamped,
        confidence=confidence,
        per_theta=tuple(per_theta),
    )


def _invert(gamma, gamma_stderr, theta, delta_phi, tau):
    theta = check_theta(theta)
    if theta == 0.0:
        raise NonIdentifiableError("at theta = 0 the decay rate does not depend on C")
    if delta_phi <= 0 or tau <= 0:
        raise FitError("delta_phi and tau must be positive")
    r = gamma * tau / delta_phi**2
    if r <= 0:
        raise FitError(f"fitted rate must be positive, got gamma = {gamma}")
    c_raw = (r - 1.0) / (theta * (r + 1.0))
    dc_dr = 2.0 / (theta * (r + 1.0) ** 2)
    return c_raw, dc_dr * gamma_stderr * tau / delta_phi**2


def infer_correlation(fit, theta, delta_phi, tau, confidence=CONFIDENCE, resolution=RESOLUTION):
    """Invert one fitted decay rate into a correlation estimate and regime."""
    c_raw, stderr = _invert(fit.gamma_hat, fit.gamma_stderr, theta, delta_phi, tau)
    return _finish(c_raw, stderr, [theta], delta_phi, confidence, resolution)


def diagnose(curves, delta_phi, tau, model=FitModel.FULL_MODEL, confidence=CONFIDENCE,
             resolution=RESOLUTION, convention=analytic.DEFAULT_GAMMA0_CONVENTION):
    """Combine curves at several filter strengths into one diagnosis.

    ``curves`` is a sequence of ``(theta, SurvivalCurve)``. A ``theta = 0``
    curve, if given, calibrates ``dphi^2 / tau`` (its rate is independent of
    C); the other curves are inverted separately and pooled by inverse
    variance.
    """
    curves = [(check_theta(th), cv) for th, cv in curves]
    reference = [cv for th, cv in curves if th == 0.0]
    probes = [(th, cv) for th, cv in curves if th > 0.0]
    if not probes:
        raise NonIdentifiableError("need at least one curve with theta > 0")
    if reference:
        rates = [fit_decay_rate(cv, 0.0, tau, model, convention).gamma_hat for cv in reference]
        delta_phi = math.sqrt(float(np.mean(rates)) * tau)
        LOGGER.debug("calibrated delta_phi = %g rad from %d reference curve(s)", delta_phi, len(reference))
    per_theta = []
    for th, cv in probes:
        fit = fit_decay_rate(cv, th, tau, model, convention)
        c_i, se_i = _invert(fit.gamma_hat, fit.gamma_stderr, th, delta_phi, tau)
        per_theta.append((th, c_i, se_i))
    est = np.array([p[1] for p in per_theta])
    se = np.array([p[2] for p in per_theta])
    if np.any(se == 0.0):
        exact = se == 0.0
        c_comb, se_comb = float(est[exact].mean()), 0.0
    else:
        w = 1.0 / se**2
        c_comb, se_comb = float(np.sum(w * est) / np.sum(w)), float(1.0 / math.sqrt(np.sum(w)))
    return _finish(c_comb, se_comb, [p[0] for p in probes], delta_phi, confidence, resolution, per_theta)
