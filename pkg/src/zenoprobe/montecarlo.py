"""Ensemble simulation of the averaged H-survival probability.

Realisations are independent work items. They are generated in fixed-size
chunks whose boundaries depend only on the configuration, so the output is
bit-identical for any number of worker threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
import itertools
import math

import numpy as np

from .errors import DomainError, ResourceLimitError
from .noise import SHOT_STREAM, check_correlation, jump_signs, repeat_probability
from .polarization import check_theta, propagate_amplitudes, propagate_signs

CHUNK_SIZE = 16384
MAX_EXACT_BLOCKS = 20


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameterisation of one simulated run.

    ``delta_phi`` is in radians; use :meth:`from_degrees` for the usual
    degree input.
    """

    delta_phi: float
    theta: float
    c: float
    seed: int
    n_blocks: int = 7
    tau: float = 1.0
    n_realizations: int = 100
    shots: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.delta_phi) and self.delta_phi > 0):
            raise DomainError(f"delta_phi must be positive and finite, got {self.delta_phi}")
        check_theta(self.theta)
        check_correlation(self.c)
        if int(self.n_blocks) != self.n_blocks or self.n_blocks < 1:
            raise DomainError(f"n_blocks must be an integer >= 1, got {self.n_blocks}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise DomainError(f"tau must be positive, got {self.tau}")
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise DomainError(f"n_realizations must be an integer >= 1, got {self.n_realizations}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.shots is not None and (int(self.shots) != self.shots or self.shots < 1):
            raise DomainError(f"shots must be a positive integer, got {self.shots}")

    @classmethod
    def from_degrees(cls, delta_phi_deg, **kwargs):
        return cls(delta_phi=math.radians(delta_phi_deg), **kwargs)

    @property
    def delta_phi_deg(self):
        return math.degrees(self.delta_phi)

    @property
    def times(self):
        return self.tau * np.arange(1, self.n_blocks + 1)

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SurvivalCurve:
    """Per-block mean and spread of the H-survival probability.

    ``std`` is the sample standard deviation across realisations (not the
    standard error of the mean). ``cov`` is the sample covariance between
    blocks, kept for fits that need correlated errors.
    """

    times: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    n_realizations: int
    cov: np.ndarray | None = field(default=None, repr=False)

    @property
    def stderr(self):
        return self.std / math.sqrt(self.n_realizations)

    def __len__(self):
        return len(self.mean)


def derive_seed(seed, theta):
    """Sub-seed for one filter strength, keyed on the exact float bits of theta."""
    tag = int(np.float64(theta).view(np.uint64))
    words = np.random.SeedSequence(entropy=int(seed), spawn_key=(tag,)).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def _simulate_chunk(config, start, rows):
    signs = jump_signs(rows, config.n_blocks, config.c, config.seed, start=start)
    probs = propagate_signs(signs, config.delta_phi, config.theta)
    if config.shots is not None:
        bitgen = np.random.Philox(
            key=np.array([config.seed, SHOT_STREAM], dtype=np.uint64),
            counter=np.array([0, start // CHUNK_SIZE, 0, 0], dtype=np.uint64),
        )
        rng = np.random.Generator(bitgen)
        probs = rng.binomial(config.shots, np.clip(probs, 0.0, 1.0)) / config.shots
    return probs


def simulate_realizations(config, workers=1):
    """Per-realisation survival matrix of shape ``(n_realizations, n_blocks)``."""
    m = config.n_realizations
    starts = list(range(0, m, CHUNK_SIZE))
    out = np.empty((m, config.n_blocks))

    def work(start):
        rows = min(CHUNK_SIZE, m - start)
        out[start:start + rows] = _simulate_chunk(config, start, rows)

    if workers <= 1 or len(starts) == 1:
        for s in starts:
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, starts))
    return out


def summarize(times, samples):
    """Reduce a realisation matrix to a :class:`SurvivalCurve`.

    Statistics are taken on data shifted by the first row, so that identical
    realisations give exactly that value and exactly zero spread.
    """
    m = samples.shape[0]
    dev = samples - samples[0]
    mean_dev = dev.mean(axis=0)
    mean = samples[0] + mean_dev
    if m > 1:
        centred = dev - mean_dev
        cov = centred.T @ centred / (m - 1)
        std = np.sqrt(np.einsum("ij,ij->j", centred, centred) / (m - 1))
    else:
        cov = np.zeros((samples.shape[1],) * 2)
        std = np.zeros(samples.shape[1])
    return SurvivalCurve(times=np.asarray(times, dtype=float), mean=mean, std=std, n_realizations=m, cov=cov)


def run_ensemble(config, workers=1):
    """Monte Carlo estimate of the averaged survival at every block.

    Examples
    --------
    >>> cfg = ExperimentConfig.from_degrees(4, theta=0.0, c=0.4, seed=1)
    >>> curve = run_ensemble(cfg)
    >>> float(curve.std.max())
    0.0
    """
    return summarize(config.times, simulate_realizations(config, workers))


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    mean: float
    std: float
    stderr: float
    curve: SurvivalCurve


def theta_sweep(base, thetas, workers=1):
    """Final-block survival versus filter strength, sorted by theta.

    Each theta runs with its own sub-seed from :func:`derive_seed`.
    """
    thetas = sorted(float(t) for t in thetas)
    if not thetas:
        raise DomainError("theta list is empty")
    points = []
    for th in thetas:
        curve = run_ensemble(base.replace(theta=th, seed=derive_seed(base.seed, th)), workers)
        points.append(SweepPoint(th, float(curve.mean[-1]), float(curve.std[-1]), float(curve.stderr[-1]), curve))
    return points


def sign_patterns(n_blocks):
    """All ``2**n_blocks`` sign rows and their count of repeated signs."""
    rows = np.array(list(itertools.product((1, -1), repeat=n_blocks)), dtype=np.int8)
    repeats = np.sum(rows[:, 1:] == rows[:, :-1], axis=1)
    return rows, repeats


def exact_average(config, observable="H"):
    """Exact ensemble average by enumerating every sign sequence.

    Each pattern carries weight ``0.5 * p**repeats * (1-p)**flips``. The
    returned curve has zero ``std`` and ``n_realizations`` equal to the
    number of patterns with non-zero weight. ``observable="V"`` averages the
    squared V amplitude instead of the H survival.
    """
    if observable not in ("H", "V"):
        raise DomainError(f"observable must be 'H' or 'V', got {observable!r}")
    n = config.n_blocks
    if n > MAX_EXACT_BLOCKS:
        raise ResourceLimitError(f"exact enumeration limited to {MAX_EXACT_BLOCKS} blocks, got {n}")
    rows, repeats = sign_patterns(n)
    p = repeat_probability(config.c)
    flips = (n - 1) - repeats
    weights = 0.5 * p**repeats * (1.0 - p) ** flips
    a_h, a_v = propagate_amplitudes(rows, config.delta_phi, config.theta)
    amp = a_h if observable == "H" else a_v
    mean = weights @ (amp * amp)
    zeros = np.zeros(n)
    return SurvivalCurve(
        times=config.times,
        mean=mean,
        std=zeros,
        n_realizations=int(np.count_nonzero(weights)),
        cov=np.zeros((n, n)),
    )
