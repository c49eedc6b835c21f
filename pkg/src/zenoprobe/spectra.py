r"""Bath and measurement-control spectra on the discrete-time band.

Both spectra are Poisson kernels on :math:`(-\pi/\tau, \pi/\tau)`:

.. math::

   G(\omega) = \frac{\Delta\phi^2}{2\pi\tau}
               \frac{1 - C^2}{1 + C^2 - 2C\cos\omega\tau}, \qquad
   F(\omega) = \frac{\tau}{2\pi}
               \frac{1 - \theta^2}{1 + \theta^2 - 2\theta\cos\omega\tau}

and the decay rate is their overlap :math:`2\pi\int G F\,d\omega`.
At :math:`|C| = 1` or :math:`\theta = 1` the kernels collapse to delta
combs; this is reported with :class:`DegenerateSpectrumWarning` instead of
being approximated.
"""
import logging
import math
import warnings

import numpy as np

from .analytic import decay_rate_gamma
from .errors import ConvergenceError, DomainError
from .noise import check_correlation
from .polarization import check_theta

LOGGER = logging.getLogger(__name__)

DEFAULT_NODES = 4096
MAX_NODES = 2**20
QUADRATURE_RTOL = 1e-10
NEAR_DEGENERATE = 0.95


class DegenerateSpectrumWarning(RuntimeWarning):
    """A spectrum was requested at a delta-function limit."""


def _poisson_kernel(omega, r, tau):
    """``(1 - r^2) / (1 + r^2 - 2 r cos(omega tau))`` with delta-limit handling."""
    omega = np.asarray(omega, dtype=float)
    if abs(r) < 1.0:
        return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * np.cos(omega * tau))
    # |r| = 1: zero except where the denominator vanishes.
    singular = np.isclose(np.cos(omega * tau), math.copysign(1.0, r), rtol=0.0, atol=1e-15)
    return np.where(singular, np.inf, 0.0)


def is_degenerate(r):
    return abs(r) >= 1.0


def bath_spectrum(omega, delta_phi, tau, c):
    """Spectral density of the rotation-angle fluctuations.

    At ``|C| = 1`` the returned array is zero away from the delta peaks and
    ``inf`` on them, and a :class:`DegenerateSpectrumWarning` is issued.
    """
    c = check_correlation(c)
    if tau <= 0:
        raise DomainError("tau must be positive")
    if is_degenerate(c):
        warnings.warn(f"bath spectrum is a delta comb at C = {c}", DegenerateSpectrumWarning, stacklevel=2)
    return delta_phi**2 / (2.0 * math.pi * tau) * _poisson_kernel(omega, c, tau)


def control_spectrum(omega, tau, theta):
    """Measurement control spectrum (filter function) of the repeated filter."""
    theta = check_theta(theta)
    if tau <= 0:
        raise DomainError("tau must be positive")
    if is_degenerate(theta):
        warnings.warn("control spectrum is a delta comb at theta = 1", DegenerateSpectrumWarning, stacklevel=2)
    return tau / (2.0 * math.pi) * _poisson_kernel(omega, theta, tau)


def band_nodes(n, tau):
    """``n`` equispaced nodes covering one period ``[-pi/tau, pi/tau)``."""
    return -math.pi / tau + (2.0 * math.pi / tau) * np.arange(n) / n


def periodic_trapezoid(func, tau, n):
    """Trapezoid rule over one period of a ``2 pi / tau``-periodic integrand.

    For smooth periodic integrands this converges geometrically in ``n``.
    """
    w = band_nodes(n, tau)
    return float(np.sum(func(w)) * (2.0 * math.pi / tau) / n)


def integrate_band(func, tau, n=DEFAULT_NODES, rtol=QUADRATURE_RTOL, max_nodes=MAX_NODES):
    """Integrate over the band, doubling ``n`` until successive values agree."""
    prev = periodic_trapezoid(func, tau, n)
    while True:
        if 2 * n > max_nodes:
            raise ConvergenceError(
                f"band integral not converged to rtol={rtol} with {n} nodes", estimate=prev
            )
        n *= 2
        cur = periodic_trapezoid(func, tau, n)
        if abs(cur - prev) <= rtol * abs(cur) or cur == prev:
            return cur
        prev = cur


def kk_decay_rate(delta_phi, tau, c, theta, n_quadrature=DEFAULT_NODES, max_nodes=MAX_NODES):
    """Decay rate as the overlap ``2 pi * integral(G F)`` over the band.

    Parameters
    ----------
    delta_phi, tau : float
        Jump magnitude (radians) and block spacing.
    c, theta : float
        Noise correlation and filter strength.
    n_quadrature : int
        Starting node count; doubled until converged.
    max_nodes : int
        Node budget before :class:`ConvergenceError` is raised.

    Notes
    -----
    For ``|C|`` or ``theta`` above 0.95 the integrands are too sharply peaked
    for the default budget, and the exactly equivalent closed form is returned
    with a warning.
    """
    c = check_correlation(c)
    theta = check_theta(theta)
    if is_degenerate(c) and is_degenerate(theta):
        raise DomainError("both spectra are delta combs; the overlap is undefined")
    if c * theta >= 1.0:
        raise DomainError("C * theta must be < 1")
    if abs(c) > NEAR_DEGENERATE or theta > NEAR_DEGENERATE:
        warnings.warn(
            f"near-degenerate kernel (C={c}, theta={theta}); using the closed form",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
        return decay_rate_gamma(delta_phi, tau, c, theta)

    def integrand(w):
        return bath_spectrum(w, delta_phi, tau, c) * control_spectrum(w, tau, theta)

    return 2.0 * math.pi * integrate_band(integrand, tau, n_quadrature, max_nodes=max_nodes)


def correlated_linewidth(tau, c):
    """``Gamma_B = (1 - C) / tau``."""
    return (1.0 - check_correlation(c)) / tau


def anticorrelated_linewidth(tau, c):
    """``Gamma_B' = (1 + C) / tau``."""
    return (1.0 + check_correlation(c)) / tau


def lorentz_correlated_approx(omega, delta_phi, tau, c):
    """Narrow Lorentzian at ``omega = 0`` approximating the bath for ``C ~ 1``."""
    gb = correlated_linewidth(tau, c)
    omega = np.asarray(omega, dtype=float)
    return delta_phi**2 / (math.pi * tau**2) * gb / (gb * gb + omega * omega)


def lorentz_anticorrelated_approx(omega, delta_phi, tau, c):
    """Pair of Lorentzians at ``omega = +-pi/tau`` for ``C ~ -1``."""
    gb = anticorrelated_linewidth(tau, c)
    omega = np.asarray(omega, dtype=float)
    total = 0.0
    for k in (1, -1):
        total = total + gb / (gb * gb + (math.pi / tau + k * omega) ** 2)
    return delta_phi**2 / (math.pi * tau**2) * total


def spectrum_grid(kind, params, delta_phi, tau, n_omega=512):
    """Evaluate G (``kind="bath"``) or F (``kind="control"``) on a grid.

    Returns ``(omega, params, values)`` with ``values`` of shape
    ``(len(params), n_omega)``. The omega grid is symmetric about zero and
    excludes the band edges.
    """
    omega = (np.arange(n_omega) + 0.5) * (2.0 * math.pi / tau) / n_omega - math.pi / tau
    params = np.asarray(params, dtype=float)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrumWarning)
        for p in params:
            if kind == "bath":
                rows.append(bath_spectrum(omega, delta_phi, tau, p))
            elif kind == "control":
                rows.append(control_spectrum(omega, tau, p))
            else:
                raise DomainError(f"unknown spectrum kind {kind!r}")
    return omega, params, np.array(rows)
