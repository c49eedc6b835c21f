r"""Closed-form survival probabilities and rates.

Two regimes are covered:

* identical jumps (``C = 1``), solved exactly for any block count via the
  eigenvalues of the one-block transfer matrix;
* random jumps with small angles, where the ensemble-averaged H and V
  probabilities obey the linear rate equations

  .. math::

     \dot P_H = -\gamma P_H + \gamma P_V, \qquad
     \dot P_V = \gamma P_H - (\gamma + 2\Gamma_0) P_V

  with polarisation decay rate :math:`\gamma` and absorption rate
  :math:`\Gamma_0`.

The absorption rate has two conventions that differ by a factor of 2; the
choice is a named setting, ``"log_theta"`` (:math:`-\ln\theta/\tau`, the
default) or ``"half_log_theta"`` (:math:`-\ln\theta/2\tau`).
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, SingularityError
from .noise import check_correlation
from .polarization import check_theta

GAMMA0_CONVENTIONS = {"log_theta": 1.0, "half_log_theta": 0.5}
DEFAULT_GAMMA0_CONVENTION = "log_theta"

VALIDITY_EPSILON = 0.1
# Below this theta the absorption rate is treated as infinite.
PROJECTIVE_THETA = 1e-6
_CONFLUENT_GAP = 1e-9
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class RateSet:
    """Rates entering the averaged-survival formula (units of 1/time)."""

    gamma: float
    gamma0: float
    s: float
    nu: float

    @classmethod
    def from_rates(cls, gamma, gamma0, nu=0.0):
        return cls(float(gamma), float(gamma0), float(math.hypot(gamma, gamma0)), float(nu))


def effective_measurement_rate(theta, tau):
    """``nu = (1 - theta) / ((1 + theta) * tau)``."""
    theta = check_theta(theta)
    return (1.0 - theta) / ((1.0 + theta) * tau)


def nonrandom_survival(k, delta_phi, theta):
    """Exact H-survival after ``k`` identical jumps with filter strength ``theta``.

    Evaluated from the two eigenvalues
    ``lambda_pm = ((1+theta) cos(dphi) +- sqrt(D)) / 2`` with
    ``D = (1+theta)^2 cos^2(dphi) - 4 theta`` in complex arithmetic. At the
    confluent point ``D = 0`` the limit ``[lam^k + k (cos(dphi) - lam) lam^(k-1)]^2``
    is used instead.

    ``k`` may be an integer or an integer array; ``k = 0`` gives 1.
    """
    theta = check_theta(theta)
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise DomainError("block index k must be >= 0")
    c = math.cos(delta_phi)
    disc = complex((1.0 + theta) ** 2 * c * c - 4.0 * theta)
    d = np.sqrt(disc)
    lam_p = 0.5 * ((1.0 + theta) * c + d)
    lam_m = 0.5 * ((1.0 + theta) * c - d)
    kc = k_arr.astype(complex)
    if abs(lam_p - lam_m) < _CONFLUENT_GAP:
        lam = 0.5 * (1.0 + theta) * c
        amp = lam**kc + kc * (c - lam) * lam ** (kc - 1.0) if lam != 0 else (kc == 0).astype(complex)
    else:
        amp = (lam_p**kc * (c - lam_m) + lam_m**kc * (lam_p - c)) / d
    val = amp * amp
    if np.any(np.abs(val.imag) > _IMAG_TOL):
        raise ArithmeticError("non-negligible imaginary residue in closed form")
    out = np.where(k_arr == 0, 1.0, val.real)
    return float(out) if out.ndim == 0 else out


def zeno_exponential(t, delta_phi, tau, theta):
    """Small-angle exponential limit ``exp(-dphi^2 t / (tau^2 nu))``.

    Meaningful for ``delta_phi << 1 - theta``; the caller checks that.
    """
    theta = check_theta(theta)
    if theta == 1.0:
        raise DomainError("zeno_exponential needs theta < 1 (nu vanishes at theta = 1)")
    nu = effective_measurement_rate(theta, tau)
    return np.exp(-(delta_phi**2) * np.asarray(t, dtype=float) / (tau**2 * nu))


def decay_rate_gamma(delta_phi, tau, c, theta):
    """Polarisation decay rate ``(1 + C theta)/(1 - C theta) * dphi^2 / tau``."""
    c = check_correlation(c)
    theta = check_theta(theta)
    ct = c * theta
    if ct >= 1.0:
        raise SingularityError(f"decay rate diverges for C*theta = {ct} >= 1")
    return (1.0 + ct) / (1.0 - ct) * delta_phi**2 / tau


def absorption_rate_gamma0(theta, tau, convention=DEFAULT_GAMMA0_CONVENTION):
    """Absorption rate ``-factor * ln(theta) / tau``; ``inf`` at ``theta = 0``."""
    theta = check_theta(theta)
    try:
        factor = GAMMA0_CONVENTIONS[convention]
    except KeyError:
        raise DomainError(f"unknown absorption-rate convention {convention!r}") from None
    if theta == 0.0:
        return math.inf
    return -factor * math.log(theta) / tau if theta < 1.0 else 0.0


def rates_for(delta_phi, tau, c, theta, convention=DEFAULT_GAMMA0_CONVENTION):
    gamma = decay_rate_gamma(delta_phi, tau, c, theta)
    gamma0 = absorption_rate_gamma0(theta, tau, convention)
    return RateSet.from_rates(gamma, gamma0, effective_measurement_rate(theta, tau))


def _branch_exponents(rates):
    # S - gamma0 written as gamma^2 / (S + gamma0) to avoid cancellation.
    g, g0, s = rates.gamma, rates.gamma0, rates.s
    slow = g * g / (s + g0) - g
    fast = -(s + g + g0)
    return slow, fast


def averaged_survival(t, rates):
    r"""Ensemble-averaged H probability from the rate equations.

    .. math::

       P_H(t) = e^{-(\gamma+\Gamma_0)t}\,[\cosh St + (\Gamma_0/S)\sinh St]

    computed as a sum of two decaying exponentials so that large ``S t``
    cannot overflow.
    """
    t = np.asarray(t, dtype=float)
    if rates.s == 0.0:
        return np.ones_like(t) if t.ndim else 1.0
    if math.isinf(rates.gamma0):
        out = np.exp(-rates.gamma * t)
        return float(out) if out.ndim == 0 else out
    slow, fast = _branch_exponents(rates)
    ratio = rates.gamma0 / rates.s
    out = 0.5 * (1.0 + ratio) * np.exp(slow * t) + 0.5 * (1.0 - ratio) * np.exp(fast * t)
    return float(out) if out.ndim == 0 else out


def averaged_v_survival(t, rates):
    """Companion V probability ``e^{-(gamma+gamma0) t} (gamma/S) sinh(S t)``."""
    t = np.asarray(t, dtype=float)
    if rates.s == 0.0 or math.isinf(rates.gamma0):
        return np.zeros_like(t) if t.ndim else 0.0
    slow, fast = _branch_exponents(rates)
    out = 0.5 * rates.gamma / rates.s * (np.exp(slow * t) - np.exp(fast * t))
    return float(out) if out.ndim == 0 else out


def weak_measurement_survival(t, gamma):
    """Pure exponential decay ``exp(-gamma t)``."""
    return np.exp(-gamma * np.asarray(t, dtype=float))


def random_survival(t, delta_phi, tau, c, theta, convention=DEFAULT_GAMMA0_CONVENTION):
    """Averaged survival for random jumps, switching to the projective limit.

    For ``theta < PROJECTIVE_THETA`` the absorption rate is effectively
    infinite and the decay is ``exp(-dphi^2 t / tau)``.
    """
    theta = check_theta(theta)
    if theta < PROJECTIVE_THETA:
        return weak_measurement_survival(t, delta_phi**2 / tau)
    return averaged_survival(t, rates_for(delta_phi, tau, c, theta, convention))


def rate_equation_rhs(p_h, p_v, rates):
    """Time derivatives ``(dP_H/dt, dP_V/dt)`` of the rate equations."""
    g, g0 = rates.gamma, rates.gamma0
    return -g * p_h + g * p_v, g * p_h - (g + 2.0 * g0) * p_v


def validity_check(delta_phi, c, theta, epsilon=VALIDITY_EPSILON):
    """Check the small-jump condition ``dphi^2 << (1 - C)(1 - C theta)``.

    Returns
    -------
    valid : bool
        ``ratio <= epsilon``.
    ratio : float
        ``dphi^2 / ((1 - C)(1 - C theta))``; ``inf`` when the bound vanishes.
    """
    c = check_correlation(c)
    theta = check_theta(theta)
    bound = (1.0 - c) * (1.0 - c * theta)
    num = delta_phi**2
    if num == 0.0:
        ratio = 0.0
    elif bound <= 0.0:
        ratio = math.inf
    else:
        ratio = num / bound
    return ratio <= epsilon, ratio
