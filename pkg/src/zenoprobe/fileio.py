"""Configuration parsing and file emission.

Every CSV written here starts with ``#``-prefixed header lines carrying the
format version, the producing command, the random generator identity and
the full resolved configuration as one-line JSON. Numbers are written with
17 significant digits so data sections regenerate byte for byte.
"""
import csv
import io
import json
import math
import warnings
from pathlib import Path

import numpy as np
import yaml

from .analytic import validity_check
from .errors import DomainError
from .montecarlo import ExperimentConfig, SurvivalCurve
from .noise import GENERATOR_ID

FORMAT_VERSION = "1.0.0"

CONFIG_KEYS = {"delta_phi_deg", "theta", "c", "n_blocks", "tau", "n_realizations", "seed", "shots"}
CONFIG_DEFAULTS = {"tau": 1.0, "n_realizations": 100, "n_blocks": 7}


class ConfigError(DomainError):
    """A configuration document is malformed or out of bounds."""


class ValidityWarning(UserWarning):
    """Parameters violate the small-jump condition of the rate model."""


def fmt(x):
    """Fixed 17-significant-digit rendering used for all numeric output."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _number(doc, key, kind=float):
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {val!r}")
    if kind is int:
        if int(val) != val:
            raise ConfigError(f"{key}: expected an integer, got {val!r}")
        return int(val)
    return float(val)


def config_from_mapping(doc):
    """Validate a key-value mapping into an :class:`ExperimentConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    missing = sorted({"delta_phi_deg", "theta", "c", "seed"} - set(doc))
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    doc = {**CONFIG_DEFAULTS, **doc}
    dphi = _number(doc, "delta_phi_deg")
    theta = _number(doc, "theta")
    c = _number(doc, "c")
    checks = [
        ("delta_phi_deg", 0 < dphi < 360, "0 < delta_phi_deg < 360"),
        ("theta", 0.0 <= theta <= 1.0, "0 <= theta <= 1"),
        ("c", -1.0 <= c <= 1.0, "-1 <= c <= 1"),
    ]
    for key, ok, bound in checks:
        if not ok:
            raise ConfigError(f"{key}: value {doc[key]!r} violates {bound}")
    n_blocks = _number(doc, "n_blocks", int)
    m = _number(doc, "n_realizations", int)
    seed = _number(doc, "seed", int)
    tau = _number(doc, "tau")
    shots = doc.get("shots")
    if shots is not None:
        shots = _number(doc, "shots", int)
    for key, val, ok, bound in [
        ("n_blocks", n_blocks, n_blocks >= 1, "n_blocks >= 1"),
        ("n_realizations", m, m >= 1, "n_realizations >= 1"),
        ("seed", seed, 0 <= seed < 2**64, "0 <= seed < 2**64"),
        ("tau", tau, tau > 0, "tau > 0"),
        ("shots", shots, shots is None or shots >= 1, "shots >= 1"),
    ]:
        if not ok:
            raise ConfigError(f"{key}: value {val!r} violates {bound}")
    cfg = ExperimentConfig(
        delta_phi=math.radians(dphi), theta=theta, c=c, seed=seed,
        n_blocks=n_blocks, tau=tau, n_realizations=m, shots=shots,
    )
    valid, ratio = validity_check(cfg.delta_phi, c, theta)
    if not valid:
        warnings.warn(
            f"small-jump condition violated: dphi^2/((1-C)(1-C theta)) = {ratio:.3g}",
            ValidityWarning,
            stacklevel=2,
        )
    return cfg


def parse_config(text):
    """Parse a YAML (or JSON) configuration document.

    Angles are given in degrees as ``delta_phi_deg``. ``seed`` is required;
    ``tau``, ``n_realizations`` and ``n_blocks`` default to 1, 100 and 7.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed configuration document: {exc}") from exc
    return config_from_mapping(doc)


def config_to_mapping(cfg):
    doc = {
        "delta_phi_deg": cfg.delta_phi_deg,
        "theta": cfg.theta,
        "c": cfg.c,
        "n_blocks": cfg.n_blocks,
        "tau": cfg.tau,
        "n_realizations": cfg.n_realizations,
        "seed": cfg.seed,
    }
    if cfg.shots is not None:
        doc["shots"] = cfg.shots
    return doc


def file_header(command, extra):
    lines = [f"# format_version: {FORMAT_VERSION}", f"# command: {command}", f"# generator: {GENERATOR_ID}"]
    for key, val in extra.items():
        lines.append(f"# {key}: {json.dumps(val, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def render_table(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_text(path, text):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def survival_csv(curve, cfg, command="simulate"):
    """Render a survival curve with its configuration header."""
    extra = {"config": config_to_mapping(cfg)}
    if curve.cov is not None:
        extra["cov"] = [[float(v) for v in row] for row in np.asarray(curve.cov)]
    rows = [
        (k, t, m, s, curve.n_realizations)
        for k, (t, m, s) in enumerate(zip(curve.times, curve.mean, curve.std), start=1)
    ]
    return file_header(command, extra) + render_table(["k", "t_k", "mean", "std", "n_realizations"], rows)


def split_document(text):
    """Separate ``# key: value`` header lines from the CSV data section."""
    header = {}
    data_lines = []
    for line in text.splitlines(keepends=True):
        if line.startswith("# ") and not data_lines:
            key, _, val = line[2:].rstrip("\n").partition(": ")
            try:
                header[key] = json.loads(val)
            except json.JSONDecodeError:
                header[key] = val
        else:
            data_lines.append(line)
    return header, "".join(data_lines)


def read_survival_csv(text):
    """Inverse of :func:`survival_csv`; returns ``(config, curve)``."""
    header, data = split_document(text)
    if "config" not in header:
        raise ConfigError("survival file lacks an embedded configuration")
    cfg = config_from_mapping(header["config"])
    rows = list(csv.DictReader(io.StringIO(data)))
    if not rows:
        raise ConfigError("survival file has no data rows")
    cov = np.array(header["cov"], dtype=float) if "cov" in header else None
    curve = SurvivalCurve(
        times=np.array([float(r["t_k"]) for r in rows]),
        mean=np.array([float(r["mean"]) for r in rows]),
        std=np.array([float(r["std"]) for r in rows]),
        n_realizations=int(rows[0]["n_realizations"]),
        cov=cov,
    )
    return cfg, curve


def report_text(report):
    """Key-value rendering of a diagnosis report."""
    lines = [f"format_version: {FORMAT_VERSION}"]
    for key, val in report.to_dict().items():
        lines.append(f"{key}: {fmt(val) if isinstance(val, float) else val}")
    for th, c_i, se_i in report.per_theta:
        lines.append(f"theta_{fmt(th)}: c_hat={fmt(c_i)} stderr={fmt(se_i)}")
    return "\n".join(lines) + "\n"


REPORT_COLUMNS = ["c_hat", "c_low", "c_high", "c_stderr", "regime", "validity_margin", "clamped", "confidence"]


def report_csv_rows(reports, labels=None):
    """CSV batch rendering of several reports, optionally with a label column."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = (["label"] if labels is not None else []) + REPORT_COLUMNS
    writer.writerow(cols)
    for i, rep in enumerate(reports):
        d = rep.to_dict()
        row = [labels[i]] if labels is not None else []
        row += [fmt(d[k]) if isinstance(d[k], float) else d[k] for k in REPORT_COLUMNS]
        writer.writerow(row)
    return buf.getvalue()
