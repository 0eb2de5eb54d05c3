"""Command-line entry point: ``eval``, ``check`` and ``figure`` subcommands.

Exit codes: 0 success, 1 a check exceeded its tolerance, 2 invalid input
(the message names the violated constraint).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import physics, racah, wilson
from .errors import DomainError, ParamError, WilsonRacahError
from .racah import FIG2_PARAMS, RacahParams
from .wilson import FIG1_PARAMS, WilsonParams

DEFAULT_TOL = 1e-8
ONE_BOUND_PARAMS = WilsonParams(-0.5, 1.2, 1.0, 0.8)
FIGURE_GRIDS = {1: "0.005:5:1000", 2: "-8:8:801", 3: "0:60:601"}


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _floats(text: str, count: int, name: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name} must be {count} comma-separated numbers, got {text!r}") from None
    if len(vals) != count or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{name} must be {count} finite comma-separated numbers, got {text!r}")
    return vals


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:count`` -> ``linspace(lo, hi, count)``."""
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:count, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi or count < 2:
        raise UsageError(f"grid needs finite lo < hi and count >= 2, got {text!r}")
    return np.linspace(lo, hi, count)


def default_tol() -> float:
    raw = os.environ.get("WR_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"WR_TOL must be a number, got {raw!r}") from None
    if not tol > 0:
        raise UsageError("WR_TOL must be positive")
    return tol


def _wilson_params(args) -> WilsonParams:
    return WilsonParams(*_floats(args.params, 4, "--params")) if args.params else None


def _racah_params(args) -> RacahParams:
    if not args.racah_params:
        return None
    al, be, ga = _floats(args.racah_params, 3, "--racah-params")
    if args.N is None:
        raise UsageError("--racah-params needs --N")
    return RacahParams(al, be, ga, args.N)


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_table(header: dict, columns: list[str], rows: list[list], fmt: str, out) -> None:
    if fmt == "json":
        payload = {"header": header, "columns": columns,
                   "rows": [[int(v) if isinstance(v, (int, np.integer)) else float(v) for v in r]
                            for r in rows]}
        out.write(json.dumps(payload, indent=1) + "\n")
        return
    for k, v in header.items():
        out.write(f"# {k}={v}\n")
    out.write(",".join(columns) + "\n")
    for r in rows:
        out.write(",".join(_fmt(v) for v in r) + "\n")


def _emit(args, writer) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh)
    else:
        writer(sys.stdout)


def _complex_columns(name: str, values: np.ndarray):
    """Real column, plus an imaginary column when any entry is complex."""
    if np.iscomplexobj(values) and np.any(np.imag(values) != 0):
        return [name, name + "_imag"], [np.real(values), np.imag(values)]
    return [name], [np.real(values)]


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    if args.family == "wilson":
        p = _wilson_params(args) or FIG1_PARAMS
        if args.y2 is None:
            raise UsageError("--family wilson needs --y2")
        idx = np.arange(args.n + 1)
        if args.method == "series":
            vals = np.array([wilson.wilson_series(int(n), args.y2, p) for n in idx])
        else:
            vals = wilson.tilde_table(args.n, args.y2, p)
        if args.normalized:
            vals = vals * wilson.norm_factors(args.n, p)
        header = {"command": "eval", "family": "wilson", "mu": p.mu, "nu": p.nu, "a": p.a,
                  "b": p.b, "regime": p.regime, "y2": args.y2, "normalized": args.normalized,
                  "method": args.method}
    else:
        r = _racah_params(args) or FIG2_PARAMS
        if args.m is None:
            raise UsageError("--family racah needs --m")
        if not (0 <= args.n <= r.N and 0 <= args.m <= r.N):
            raise UsageError(f"n and m must lie in 0..N={r.N}")
        idx = np.arange(args.n + 1)
        if args.normalized:
            vals = racah.racah_normalize(r, args.method).values[: args.n + 1, args.m]
        elif args.method == "series":
            vals = np.array([racah.racah_series(int(n), args.m, r, args.form) for n in idx])
        else:
            vals = racah.racah_table(r, args.form).values[: args.n + 1, args.m]
        header = {"command": "eval", "family": "racah", "alpha": r.alpha, "beta": r.beta,
                  "gamma": r.gamma, "delta": r.delta, "N": r.N, "m": args.m,
                  "form": "orthonormal" if args.normalized else args.form, "method": args.method}
    names, cols = _complex_columns("value", np.asarray(vals))
    rows = [[int(n)] + [c[i] for c in cols] for i, n in enumerate(idx)]
    _emit(args, lambda fh: write_table(header, ["n"] + names, rows, args.format, fh))
    return 0


def _check_residual(args, tol: float) -> tuple[float, dict]:
    rel = args.relation
    if rel in ("a4", "eq7"):
        p = _wilson_params(args) or (FIG1_PARAMS if rel == "a4" else ONE_BOUND_PARAMS)
        if rel == "a4" and p.mu < 0:
            raise ParamError(f"constraint mu >= 0 violated for a4 (mu = {p.mu}); use eq7")
        if rel == "eq7" and p.regime != "mixed":
            raise ParamError(f"eq7 needs mu < 0 in the mixed regime (regime {p.regime})")
        res = physics.mixed_orthogonality_check(p, args.nmax, tol=min(1e-10, 1e-2 * tol))
        return res, {"mu": p.mu, "nu": p.nu, "a": p.a, "b": p.b, "nmax": args.nmax}
    r = _racah_params(args) or FIG2_PARAMS
    info = {"alpha": r.alpha, "beta": r.beta, "gamma": r.gamma, "N": r.N,
            "weights_positive": racah.weights_positive(r)}
    if rel == "a17":
        vals = racah.racah_normalize(r).values
        gram = (vals * racah.racah_weights(r)[None, :]) @ vals.T
        return float(np.max(np.abs(gram - np.eye(r.N + 1)))), info
    primal, dual = racah.racah_orthogonality_check(r)
    return (primal if rel == "a13" else dual), info


def cmd_check(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    residual, info = _check_residual(args, tol)
    ok = bool(residual <= tol)
    report = {"relation": args.relation, "residual": residual, "tolerance": tol, "pass": ok}
    report.update(info)
    _emit(args, lambda fh: fh.write(json.dumps(report, indent=1) + "\n"))
    return 0 if ok else 1


def figure_data(fig_id: int, grid: np.ndarray, lam: float = 1.0, ell: int = 1):
    """``(header, columns, column arrays)`` for one of the three figures."""
    if fig_id == 1:
        if np.any(grid <= 0):
            raise DomainError("figure 1 grid must have y > 0")
        p = FIG1_PARAMS
        principal = np.array([physics.phase_shift(float(y), p) for y in grid])
        # continuous curve along the grid, anchored at the first principal value
        delta = np.unwrap(principal)
        header = {"figure": 1, "mu": p.mu, "nu": p.nu, "a": p.a, "b": p.b,
                  "quantity": "phase shift / pi (unwrapped along y; principal value in last column)"}
        return (header, ["y", "delta_over_pi", "delta_principal_over_pi"],
                [grid, delta / math.pi, principal / math.pi])
    r = FIG2_PARAMS
    if fig_id == 2:
        spec = physics.BasisSpec("hermite1d", lam)
        coord = "x"
    else:
        if np.any(grid < 0):
            raise DomainError("figure 3 grid must have r >= 0")
        spec = physics.BasisSpec("laguerre_radial", lam, ell)
        coord = "r"
    header = {"figure": fig_id, "alpha": r.alpha, "beta": r.beta, "gamma": r.gamma,
              "delta": r.delta, "N": r.N, "basis": spec.kind, "lambda": lam,
              "weights_positive": racah.weights_positive(r)}
    if fig_id == 3:
        header["ell"] = ell
    re_names, im_names, re_cols, im_cols = [], [], [], []
    for m in range(4):
        v = np.asarray(physics.synthesize_bound_state(r, m, spec, grid).values)
        re_names.append(f"psi{m}")
        re_cols.append(np.real(v))
        if np.iscomplexobj(v):
            im_names.append(f"psi{m}_imag")
            im_cols.append(np.imag(v))
    return header, [coord] + re_names + im_names, [grid] + re_cols + im_cols


def cmd_figure(args) -> int:
    grid = parse_grid(args.grid or FIGURE_GRIDS[args.id])
    header, columns, cols = figure_data(args.id, grid, args.lam, args.ell)
    data = np.column_stack(cols)
    if not np.all(np.isfinite(data)):
        raise ParamError("figure data contains non-finite values")
    rows = data.tolist()
    _emit(args, lambda fh: write_table(header, columns, rows, args.format, fh))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wilson-racah",
                                     description="Wilson and Racah polynomial toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--params", help="Wilson parameters mu,nu,a,b")
        sp.add_argument("--racah-params", help="Racah parameters alpha,beta,gamma (with --N)")
        sp.add_argument("--N", type=int, help="Racah support size N")
        sp.add_argument("--output", "-o", help="output file (default stdout)")

    ev = sub.add_parser("eval", help="evaluate a polynomial family")
    common(ev)
    ev.add_argument("--family", choices=("wilson", "racah"), required=True)
    ev.add_argument("--n", type=int, required=True, help="highest degree (rows 0..n)")
    ev.add_argument("--y2", type=float, help="Wilson argument y^2")
    ev.add_argument("--m", type=int, help="Racah argument m")
    ev.add_argument("--normalized", action="store_true")
    ev.add_argument("--form", choices=("tilde", "bare"), default="tilde",
                    help="Racah form when not normalized")
    ev.add_argument("--method", choices=("series", "recursion"), default="series")
    ev.add_argument("--format", choices=("csv", "json"), default="csv")
    ev.set_defaults(func=cmd_eval)

    ch = sub.add_parser("check", help="verify an orthogonality relation")
    common(ch)
    ch.add_argument("--relation", choices=("a4", "a13", "a17", "a18", "eq7"), required=True)
    ch.add_argument("--nmax", type=int, default=8)
    ch.add_argument("--tol", type=float, help="pass threshold (default WR_TOL or 1e-8)")
    ch.set_defaults(func=cmd_check)

    fg = sub.add_parser("figure", help="emit figure data")
    fg.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    fg.add_argument("--grid", help="lo:hi:count")
    fg.add_argument("--lam", type=float, default=1.0)
    fg.add_argument("--ell", type=int, default=1)
    fg.add_argument("--format", choices=("csv", "json"), default="csv")
    fg.add_argument("--output", "-o")
    fg.set_defaults(func=cmd_figure)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
            raise UsageError("--n must be non-negative")
        if getattr(args, "nmax", 0) < 0:
            raise UsageError("--nmax must be non-negative")
        return args.func(args)
    except (UsageError, ParamError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WilsonRacahError as exc:
        # numerical failure (pole, quadrature, convergence) rather than bad input
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
