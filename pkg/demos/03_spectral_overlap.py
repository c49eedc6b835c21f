"""Decay rate as an overlap of bath and control spectra.

The bath spectrum G(w) comes from the telegraph noise and the control
spectrum F(w) from the polariser. Their overlap over one Brillouin zone
reproduces the closed-form decay rate.
"""
import math

import numpy as np

from zenoprobe import spectra
from zenoprobe.analytic import decay_rate_gamma

DPHI = math.radians(4.0)
TAU = 1.0

w = np.linspace(-math.pi, math.pi, 9)
print("w      G(C=0.4)   G(C=-0.6)  F(theta=0.5)")
for wi, g1, g2, f in zip(
    w,
    spectra.bath_spectrum(w, DPHI, TAU, 0.4),
    spectra.bath_spectrum(w, DPHI, TAU, -0.6),
    spectra.control_spectrum(w, TAU, 0.5),
):
    print(f"{wi:+.3f}  {g1:.3e}  {g2:.3e}  {f:.4f}")

print("\n C     theta  overlap       closed form")
for c in (0.4, 0.0, -0.6):
    for theta in (0.0, 0.5, 0.9):
        kk = spectra.kk_decay_rate(DPHI, TAU, c, theta)
        ref = decay_rate_gamma(DPHI, TAU, c, theta)
        print(f"{c:+.1f}  {theta:.1f}    {kk:.6e}  {ref:.6e}")

# Positive C piles G up near w = 0 where a weak polariser (theta -> 1) also
# concentrates F, so weaker measurement means faster decay. Negative C moves
# the weight of G to the zone edge where F is small.
