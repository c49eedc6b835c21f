"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numeric or convergence
error, 4 I/O error.
"""
import argparse
import logging
import sys
from pathlib import Path

from . import reproduce
from .errors import ConvergenceError, DomainError, FitError, NonIdentifiableError, SingularityError
from .fileio import (
    parse_config,
    read_survival_csv,
    report_csv_rows,
    report_text,
    survival_csv,
    write_text,
)
from .montecarlo import run_ensemble
from .spectroscopy import FitModel, diagnose

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

LOGGER = logging.getLogger("zenoprobe")


def _realizations(args, default):
    if args.realizations is not None:
        return args.realizations
    return reproduce.PRECISION_REALIZATIONS if getattr(args, "precision", False) else default


def cmd_simulate(args):
    if not args.config:
        raise DomainError("simulate needs --config PATH")
    cfg = parse_config(Path(args.config).read_text())
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.realizations is not None or args.precision:
        overrides["n_realizations"] = _realizations(args, cfg.n_realizations)
    cfg = cfg.replace(**overrides)
    curve = run_ensemble(cfg, workers=args.workers)
    text = survival_csv(curve, cfg)
    if args.out:
        write_text(args.out, text)
        print(f"P_H(t_{cfg.n_blocks}) = {curve.mean[-1]:.6f} +- {curve.stderr[-1]:.2g} -> {args.out}")
    else:
        sys.stdout.write(text)


def cmd_analyze(args):
    curves = []
    dphi = tau = None
    for path in args.files:
        cfg, curve = read_survival_csv(Path(path).read_text())
        curves.append((cfg.theta, curve))
        dphi, tau = cfg.delta_phi, cfg.tau
    report = diagnose(curves, dphi, tau, model=FitModel(args.model))
    text = report_csv_rows([report]) if args.csv else report_text(report)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)


def cmd_spectra(args):
    import numpy as np

    out = Path(args.out or ".")
    params_c = np.linspace(-1.0, 1.0, args.n_params)
    params_t = np.linspace(0.0, 1.0, args.n_params)
    write_text(out / "bath.csv", reproduce.spectra_table("bath", params_c, args.delta_phi_deg, args.tau, args.n_omega))
    write_text(out / "control.csv", reproduce.spectra_table("control", params_t, args.delta_phi_deg, args.tau, args.n_omega))
    print(f"wrote {out / 'bath.csv'} and {out / 'control.csv'}")


def cmd_fig3(args):
    emitted = reproduce.reproduce_fig3(args.out or ".", args.seed, _realizations(args, reproduce.DEFAULT_REALIZATIONS), args.workers)
    for e in emitted:
        print(e.path)


def cmd_fig4(args):
    thetas = args.thetas if args.thetas else reproduce.FIG4_THETAS
    emitted = reproduce.reproduce_fig4(args.out or ".", args.seed, _realizations(args, reproduce.DEFAULT_REALIZATIONS), thetas, args.workers)
    for e in emitted:
        print(e.path)


def cmd_figA(args):
    for e in reproduce.reproduce_figA(args.out or "."):
        print(e.path)


def build_parser():
    parser = argparse.ArgumentParser(prog="zenoprobe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_required=False):
        p.add_argument("--config", help="YAML configuration document")
        p.add_argument("--seed", type=int, default=None if not seed_required else 1)
        p.add_argument("--realizations", type=int, default=None, help="ensemble size M")
        p.add_argument("--out", help="output file or directory")
        p.add_argument("--precision", action="store_true", help=f"use M = {reproduce.PRECISION_REALIZATIONS}")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("simulate", help="run one ensemble and write its survival curve")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="diagnose noise correlation from survival files")
    p.add_argument("files", nargs="+")
    p.add_argument("--model", choices=[m.value for m in FitModel], default=FitModel.FULL_MODEL.value)
    p.add_argument("--csv", action="store_true", help="emit a CSV row instead of key-value text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectra", help="emit bath and control spectrum grids")
    p.add_argument("--delta-phi-deg", type=float, default=reproduce.DELTA_PHI_DEG)
    p.add_argument("--tau", type=float, default=reproduce.FIGA_TAU)
    p.add_argument("--n-omega", type=int, default=reproduce.FIGA_OMEGA)
    p.add_argument("--n-params", type=int, default=reproduce.FIGA_PARAMS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("reproduce-fig3", help="survival curves at theta 0 and 1 for three C values")
    common(p, seed_required=True)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("reproduce-fig4", help="final survival versus theta")
    common(p, seed_required=True)
    p.add_argument("--thetas", type=float, nargs="+")
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("reproduce-figA", help="spectrum grids at the plotting parameters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_figA)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ConvergenceError, SingularityError, FitError, NonIdentifiableError, ArithmeticError) as exc:
        LOGGER.error("%s", exc)
        return EXIT_NUMERIC
    except DomainError as exc:
        LOGGER.error("%s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        LOGGER.error("%s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
