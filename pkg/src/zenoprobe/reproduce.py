"""Figure-reproduction presets (data only, no plotting)."""
from dataclasses import dataclass
import math
from pathlib import Path

import numpy as np

from . import analytic
from .fileio import FORMAT_VERSION, file_header, fmt, render_table, write_text
from .montecarlo import ExperimentConfig, derive_seed, run_ensemble, theta_sweep
from .spectra import spectrum_grid

DELTA_PHI_DEG = 4.0
N_BLOCKS = 7
TAU = 1.0
CORRELATIONS = (0.4, 0.0, -0.6)
DEFAULT_REALIZATIONS = 100
PRECISION_REALIZATIONS = 100_000
EXTENDED_T = 200
FIG4_THETAS = tuple(np.round(np.linspace(0.0, 1.0, 11), 10))
FIGA_TAU = 0.05
FIGA_OMEGA = 512
FIGA_PARAMS = 101


@dataclass(frozen=True)
class Emitted:
    path: Path
    summary: dict


def base_config(c, theta, seed, m):
    return ExperimentConfig.from_degrees(
        DELTA_PHI_DEG, theta=theta, c=c, seed=seed, n_blocks=N_BLOCKS, tau=TAU, n_realizations=m
    )


def fig3_theory(t, c, theta):
    """Theory line: two-state decay without filters, projective decay with."""
    dphi = math.radians(DELTA_PHI_DEG)
    if theta == 1.0:
        gamma0 = analytic.decay_rate_gamma(dphi, TAU, c, 1.0)
        return 0.5 * (1.0 + np.exp(-2.0 * gamma0 * np.asarray(t, dtype=float)))
    return analytic.weak_measurement_survival(t, dphi**2 / TAU)


def fig3_table(c, seed, m, workers=1):
    rows = []
    summary = {}
    t_grid = np.arange(0, EXTENDED_T + 1, dtype=float)
    for theta in (0.0, 1.0):
        cfg = base_config(c, theta, derive_seed(seed, theta), m)
        curve = run_ensemble(cfg, workers)
        mc_mean = {0: 1.0, **{k + 1: v for k, v in enumerate(curve.mean)}}
        mc_std = {0: 0.0, **{k + 1: v for k, v in enumerate(curve.std)}}
        theory = fig3_theory(t_grid, c, theta)
        for t, th_val in zip(t_grid, theory):
            k = int(t)
            rows.append((theta, t, mc_mean.get(k, math.nan), mc_std.get(k, math.nan), th_val))
        summary[f"theta={theta:g}"] = {"mc_t7": float(curve.mean[-1]), "std_t7": float(curve.std[-1]),
                                       "theory_t7": float(theory[N_BLOCKS])}
    return rows, summary


def reproduce_fig3(out_dir, seed, m=DEFAULT_REALIZATIONS, workers=1):
    """One CSV per correlation value: MC curves at theta 0 and 1 plus theory."""
    out_dir = Path(out_dir)
    emitted = []
    for c in CORRELATIONS:
        rows, summary = fig3_table(c, seed, m, workers)
        header = file_header("reproduce-fig3", {
            "preset": {"delta_phi_deg": DELTA_PHI_DEG, "n_blocks": N_BLOCKS, "tau": TAU, "c": c,
                       "seed": seed, "n_realizations": m, "thetas": [0.0, 1.0], "seed_policy": "derive_seed(seed, theta)"},
        })
        text = header + render_table(["theta", "t", "mc_mean", "mc_std", "theory"], rows)
        emitted.append(Emitted(write_text(out_dir / f"fig3_C{c:+.1f}.csv", text), {"c": c, **summary}))
    write_text(out_dir / "fig3_summary.txt", _summary_text("reproduce-fig3", emitted))
    return emitted


def fig4_table(c, seed, m, thetas=FIG4_THETAS, workers=1):
    dphi = math.radians(DELTA_PHI_DEG)
    base = base_config(c, 0.0, seed, m)
    t_end = N_BLOCKS * TAU
    rows = []
    for pt in theta_sweep(base, thetas, workers):
        theory = float(analytic.random_survival(t_end, dphi, TAU, c, pt.theta))
        rows.append((c, pt.theta, pt.mean, pt.std, theory))
    return rows


def reproduce_fig4(out_dir, seed, m=DEFAULT_REALIZATIONS, thetas=FIG4_THETAS, workers=1):
    """Final-block survival versus theta for each correlation value."""
    rows = []
    for c in CORRELATIONS:
        rows.extend(fig4_table(c, seed, m, thetas, workers))
    header = file_header("reproduce-fig4", {
        "preset": {"delta_phi_deg": DELTA_PHI_DEG, "n_blocks": N_BLOCKS, "tau": TAU, "seed": seed,
                   "n_realizations": m, "thetas": [float(t) for t in thetas], "seed_policy": "derive_seed(seed, theta)"},
    })
    text = header + render_table(["c", "theta", "mc_mean", "mc_std", "theory_rate_model"], rows)
    emitted = [Emitted(write_text(Path(out_dir) / "fig4.csv", text), {"rows": len(rows)})]
    write_text(Path(out_dir) / "fig4_summary.txt", _summary_text("reproduce-fig4", emitted))
    return emitted


def spectra_table(kind, params, delta_phi_deg=DELTA_PHI_DEG, tau=FIGA_TAU, n_omega=FIGA_OMEGA):
    omega, params, values = spectrum_grid(kind, params, math.radians(delta_phi_deg), tau, n_omega)
    rows = [(w, p, v) for p, row in zip(params, values) for w, v in zip(omega, row)]
    header = file_header("spectra", {
        "equation": "bath_spectrum" if kind == "bath" else "control_spectrum",
        "parameter": "c" if kind == "bath" else "theta",
        "delta_phi_deg": delta_phi_deg,
        "tau": tau,
        "note": "rows at |parameter| = 1 are delta combs; shown as zero off the peaks",
    })
    return header + render_table(["omega", "parameter", "value"], rows)


def reproduce_figA(out_dir, delta_phi_deg=DELTA_PHI_DEG, tau=FIGA_TAU, n_omega=FIGA_OMEGA, n_params=FIGA_PARAMS):
    """Bath spectrum over (omega, C) and control spectrum over (omega, theta)."""
    out_dir = Path(out_dir)
    cs = np.linspace(-1.0, 1.0, n_params)
    thetas = np.linspace(0.0, 1.0, n_params)
    g = write_text(out_dir / "figA_bath.csv", spectra_table("bath", cs, delta_phi_deg, tau, n_omega))
    f = write_text(out_dir / "figA_control.csv", spectra_table("control", thetas, delta_phi_deg, tau, n_omega))
    return [Emitted(g, {"rows": n_omega * n_params}), Emitted(f, {"rows": n_omega * n_params})]


def _summary_text(command, emitted):
    lines = [f"format_version: {FORMAT_VERSION}", f"command: {command}"]
    for e in emitted:
        lines.append(f"file: {e.path.name}")
        for key, val in e.summary.items():
            if isinstance(val, dict):
                for k2, v2 in val.items():
                    lines.append(f"  {key}.{k2}: {fmt(v2)}")
            else:
                lines.append(f"  {key}: {fmt(val) if isinstance(val, float) else val}")
    return "\n".join(lines) + "\n"
