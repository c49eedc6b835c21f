"""Correlated dichotomous (telegraph) jump sequences.

Each jump has fixed magnitude ``delta_phi``. The first sign is a fair coin,
and every later sign repeats its predecessor with probability
``p = (C + 1) / 2``. Lag-m sign correlations are therefore ``C**m``.

Random numbers come from a counter-based Philox stream keyed by
``(seed, stream)``. Realisation ``i`` reads its uniforms starting at counter
``i * ceil(n_blocks / 4)``, so any realisation can be regenerated in
isolation and the result does not depend on how work is split.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

GENERATOR_NAME = "numpy.random.Philox-4x64-10"
GENERATOR_VERSION = "1"
GENERATOR_ID = (
    f"{GENERATOR_NAME}/v{GENERATOR_VERSION} key=(seed,stream) "
    "counter=index*ceil(n_blocks/4) u=(raw>>11)*2^-53"
)

JUMP_STREAM = 0
SHOT_STREAM = 1


def check_correlation(c):
    c = float(c)
    if not -1.0 <= c <= 1.0:
        raise DomainError(f"correlation C must lie in [-1, 1], got {c}")
    return c


def repeat_probability(c):
    return (check_correlation(c) + 1.0) / 2.0


def uniform_block(seed, n_rows, n_cols, start=0, stream=JUMP_STREAM):
    """Uniform deviates in [0, 1) for rows ``start .. start + n_rows - 1``.

    Row ``i`` always holds the same numbers for a given ``(seed, stream,
    n_cols)`` no matter which ``start``/``n_rows`` window it is drawn in.
    """
    if seed < 0 or seed >= 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    per_row = -(-n_cols // 4)
    bitgen = np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))
    if start:
        bitgen.advance(start * per_row)
    raw = bitgen.random_raw(n_rows * per_row * 4).reshape(n_rows, per_row * 4)
    return (raw[:, :n_cols] >> np.uint64(11)) * (1.0 / 9007199254740992.0)


def jump_signs(n_realizations, n_blocks, c, seed, start=0):
    """Sign matrix of shape ``(n_realizations, n_blocks)`` with entries +-1."""
    if n_blocks < 1:
        raise DomainError("n_blocks must be >= 1")
    p = repeat_probability(c)
    u = uniform_block(seed, n_realizations, n_blocks, start)
    first = np.where(u[:, :1] < 0.5, 1, -1).astype(np.int8)
    flips = np.where(u[:, 1:] < 1.0 - p, -1, 1).astype(np.int8)
    return np.cumprod(np.concatenate([first, flips], axis=1), axis=1, dtype=np.int8)


@dataclass(frozen=True)
class JumpSequence:
    """Signed rotation jumps of one realisation, in radians."""

    jumps: np.ndarray
    seed: int
    index: int = 0

    @property
    def signs(self):
        return np.sign(self.jumps).astype(int)

    def __len__(self):
        return len(self.jumps)


def generate_jump_sequence(n_blocks, delta_phi, c, stream_seed, index=0):
    """Draw realisation ``index`` of the telegraph process under ``stream_seed``.

    Examples
    --------
    >>> seq = generate_jump_sequence(5, 0.1, 1.0, stream_seed=7)
    >>> bool(np.all(seq.signs == seq.signs[0]))
    True
    """
    if not delta_phi > 0:
        raise DomainError(f"delta_phi must be positive, got {delta_phi}")
    signs = jump_signs(1, n_blocks, c, stream_seed, start=index)[0]
    return JumpSequence(jumps=signs * float(delta_phi), seed=int(stream_seed), index=int(index))


def _as_sign_rows(sequences):
    if isinstance(sequences, np.ndarray):
        rows = [np.sign(sequences)] if sequences.ndim == 1 else list(np.sign(sequences))
    else:
        rows = []
        for seq in sequences:
            arr = seq.jumps if isinstance(seq, JumpSequence) else np.asarray(seq, dtype=float)
            rows.append(np.sign(arr))
    return rows


def lag_products(sequences, lag=1):
    """All products ``sign_{k+lag} * sign_k`` pooled over the ensemble."""
    rows = _as_sign_rows(sequences)
    if not rows:
        raise DomainError("empty ensemble")
    parts = [r[lag:] * r[:-lag] for r in rows if len(r) > lag]
    return np.concatenate(parts) if parts else np.empty(0)


def empirical_correlation(sequences, lag=1):
    """Estimate C (or C**lag) from consecutive sign products.

    Flip events of the chain are independent, so lag-1 products are i.i.d.
    and their sample standard error is exact.

    Returns
    -------
    c_hat : float
    stderr : float
    """
    prods = lag_products(sequences, lag)
    if prods.size < 2:
        raise DomainError("need at least two lagged pairs")
    return float(prods.mean()), float(prods.std(ddof=1) / np.sqrt(prods.size))
