"""Follow one photon through seven noisy blocks.

Each block rotates the polarisation by +dphi or -dphi and then passes it
through a polariser that keeps H and scales V by theta. The printed column
is the H population after every block.
"""
import math

from zenoprobe import generate_jump_sequence, trajectory_survival

DPHI = math.radians(4.0)

seq = generate_jump_sequence(7, DPHI, c=0.4, stream_seed=2026)
print("signs:", " ".join(f"{s:+d}" for s in seq.signs))

for theta in (0.0, 0.5, 1.0):
    p = trajectory_survival(seq.jumps, theta)
    print(f"theta={theta:.1f}  " + "  ".join(f"{x:.5f}" for x in p))

# theta=0 is a projective measurement: the sign history no longer matters and
# every block multiplies the survival by cos^2(dphi).
print("cos^2k(dphi):", "  ".join(f"{math.cos(DPHI) ** (2 * k):.5f}" for k in range(1, 8)))
