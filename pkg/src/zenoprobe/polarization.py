"""Single-photon polarisation dynamics through rotation/measurement blocks.

The photon state is kept as a real, unnormalised amplitude pair
``(a_H, a_V)``. Each block rotates the linear polarisation by a jump angle
and then applies the partially-selective filter ``diag(1, theta)``, which
passes H untouched and attenuates the V amplitude. The squared H amplitude
after ``k`` blocks is the survival probability of that noise realisation.
"""
import numpy as np

from .errors import DomainError

H = np.array([1.0, 0.0])
V = np.array([0.0, 1.0])


def check_theta(theta):
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    return theta


def rotation_matrix(delta_phi):
    """Planar rotation of the (a_H, a_V) amplitudes by ``delta_phi`` radians."""
    c, s = np.cos(delta_phi), np.sin(delta_phi)
    return np.array([[c, -s], [s, c]])


def measurement_matrix(theta):
    """Partially-selective filter ``|H><H| + theta |V><V|``.

    ``theta = 0`` is the projector onto H, ``theta = 1`` is no measurement.
    """
    theta = check_theta(theta)
    return np.diag([1.0, theta])


def apply_block(state, jump, theta):
    """Rotate ``state`` by ``jump`` and then apply the filter."""
    theta = check_theta(theta)
    a_h, a_v = state
    c, s = np.cos(jump), np.sin(jump)
    return np.array([c * a_h - s * a_v, theta * (s * a_h + c * a_v)])


def trajectory_survival(jumps, theta):
    """H-survival probability after each block of one noise realisation.

    Parameters
    ----------
    jumps : sequence of float
        Signed rotation angles in radians, one per block.
    theta : float
        Measurement strength in [0, 1].

    Returns
    -------
    numpy.ndarray
        ``p[k-1] = a_H**2`` after ``k`` blocks, starting from ``|H>``.
    """
    theta = check_theta(theta)
    jumps = np.asarray(jumps, dtype=float)
    if jumps.ndim != 1 or jumps.size == 0:
        raise DomainError("jumps must be a non-empty 1-D sequence")
    state = H.copy()
    out = np.empty(jumps.size)
    for k, jump in enumerate(jumps):
        state = apply_block(state, jump, theta)
        out[k] = state[0] ** 2
    return out


def propagate_amplitudes(signs, delta_phi, theta):
    """Vectorised block propagation for many realisations at once.

    ``signs`` has shape ``(M, N)`` with entries +-1. Returns the H and V
    amplitudes after every block, each of shape ``(M, N)``. Rows are
    processed independently with element-wise arithmetic, so a row's result
    does not depend on which other rows share the call.
    """
    theta = check_theta(theta)
    signs = np.asarray(signs, dtype=float)
    m, n = signs.shape
    c, s = np.cos(delta_phi), np.sin(delta_phi)
    a_h = np.ones(m)
    a_v = np.zeros(m)
    out_h = np.empty((m, n))
    out_v = np.empty((m, n))
    for k in range(n):
        sk = s * signs[:, k]
        a_h, a_v = c * a_h - sk * a_v, theta * (sk * a_h + c * a_v)
        out_h[:, k] = a_h
        out_v[:, k] = a_v
    return out_h, out_v


def propagate_signs(signs, delta_phi, theta):
    """H-survival probabilities, shape ``(M, N)``, for a matrix of signs."""
    a_h, _ = propagate_amplitudes(signs, delta_phi, theta)
    return a_h * a_h


def realization_angles(theta):
    """Waveplate angle realising the filter with a polariser.

    After a rotation by ``-alpha`` the H projector transmits the H and V
    input amplitudes with factors ``cos(alpha)`` and ``sin(alpha)``, i.e.
    ``cos(alpha) * (1, theta)`` for ``alpha = arctan(theta)``. The relative
    V attenuation thus matches the ideal filter, with an extra global factor
    ``cos(alpha)`` that the simulation does not apply. The chain is rank one,
    so this is a statement about component transmittances only, not an
    operator identity.

    Returns
    -------
    alpha : float
        Rotation angle in radians.
    transmittance : float
        Global amplitude factor ``cos(alpha)``.
    """
    theta = check_theta(theta)
    alpha = float(np.arctan(theta))
    return alpha, float(np.cos(alpha))
