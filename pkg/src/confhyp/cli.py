"""Command-line interface.

Usage:
    confhyp eval w --alpha 1 --beta 2 --gamma 1 --delta 3 --z 1e6
    confhyp eval efun --upper 1 --lower 1 --z 2
    confhyp eval f2 --a 1 --b1 1 --b2 1 --c1 2 --c2 2 --x 0.5 --y 0
    confhyp verify --suite recurrences --draws 50 --seed 7 --tol 1e-9
    confhyp table integral --alpha 1 --beta 1 --gamma 0 --l 0 --rho-start 1 --rho-stop 2 --steps 2

Complex flags take the forms "a", "a+bi", "a-bi" or "bi" without spaces.
Parameter lists are comma separated; "2:3" repeats the value 2 three times.

Exit codes: 0 success, 1 usage or parameter error, 2 no convergence,
3 verification failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import sys
from typing import Optional

import click
import numpy as np

from .core import EvalResult, gamma
from .doubleseries import AppellF2Spec, KdFSpec, appell_f2, kdf_eval
from .errors import NoConvergence, QuadratureFailure, SpecialFunctionError
from .hyperseries import ParamList, SeriesControl, pfq
from .integrals import IntegralSpec, integral_closed_general
from .macrobert import EFunctionSpec, e_eval
from .verification import SUITES, run_suite
from .wfunction import WArgs, w_eval

__all__ = ["main", "cli", "parse_complex", "parse_params"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3

# relative accuracy reported for a bare gamma evaluation
GAMMA_REL_ERR = 1e-13

_UNIT_I = re.compile(r"(^|[+-])i$")


def parse_complex(text: str) -> complex:
    """Parse "a", "a+bi", "a-bi", "bi"; whitespace is rejected."""
    text = text.strip()
    if not text or any(ch.isspace() for ch in text):
        raise ValueError(f"bad complex number {text!r}")
    if text.endswith("i"):
        text = _UNIT_I.sub(lambda m: m.group(1) + "1i", text)
        text = text[:-1] + "j"
    elif "j" in text:
        raise ValueError(f"bad complex number {text!r} (use i for the imaginary unit)")
    return complex(text)


def parse_params(text: str) -> ParamList:
    """Comma separated values; "v:m" gives v with multiplicity m. Empty string is the empty list."""
    entries = []
    for part in filter(None, text.split(",")):
        if ":" in part:
            value, mult = part.split(":", 1)
            entries.append((parse_complex(value), int(mult)))
        else:
            entries.append(parse_complex(part))
    return ParamList(entries)


class ComplexType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(str(value))
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class ParamListType(click.ParamType):
    name = "params"

    def convert(self, value, param, ctx):
        if isinstance(value, ParamList):
            return value
        try:
            return parse_params(str(value))
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


COMPLEX = ComplexType()
PARAMS = ParamListType()


# ---------------------------------------------------------------- config and output


def _fmt(x: float) -> str:
    return "%.17g" % x


def _cell(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, complex):
        return f"{_fmt(value.real)}{'+' if value.imag >= 0 or math.isnan(value.imag) else '-'}{_fmt(abs(value.imag))}i"
    return value


def _csv_cell(value) -> str:
    value = _cell(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return "" if value is None else str(value)


def emit(rows, fmt: str, single: bool = False) -> None:
    """Write one object (``single``) or a list of row dicts in the chosen format."""
    out = sys.stdout
    if fmt == "json":
        data = {k: _cell(v) for k, v in rows[0].items()} if single else [
            {k: _cell(v) for k, v in row.items()} for row in rows
        ]
        out.write(json.dumps(data, indent=1, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        if rows:
            writer.writerow(list(rows[0].keys()))
            for row in rows:
                writer.writerow([_csv_cell(v) for v in row.values()])
        out.write(buf.getvalue())
    else:
        for i, row in enumerate(rows):
            if i:
                out.write("\n")
            for k, v in row.items():
                out.write(f"{k}: {_csv_cell(v)}\n")
    out.flush()


def _result_row(res: EvalResult) -> dict:
    return {
        "value_re": float(res.value.real),
        "value_im": float(res.value.imag),
        "abs_error_estimate": float(res.abs_error_estimate),
        "terms_used": int(res.terms_used),
        "converged": bool(res.converged),
    }


def _config(ctx) -> dict:
    """Merge global options: leaf-level flags override group-level ones."""
    merged = {"rel_tol": 1e-12, "max_terms": 100_000, "fmt": "json", "seed": 0}
    chain = []
    c = ctx
    while c is not None:
        chain.append(c)
        c = c.parent
    for c in reversed(chain):
        for key in merged:
            value = c.params.get(key)
            if value is not None:
                merged[key] = value
    return merged


def _control(cfg) -> SeriesControl:
    return SeriesControl(rel_tol=cfg["rel_tol"], max_terms=cfg["max_terms"])


def common_options(func):
    func = click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed for randomized draws.")(func)
    func = click.option(
        "--format", "fmt", type=click.Choice(["json", "csv", "text"]), default=None, help="Output format."
    )(func)
    func = click.option("--max-terms", type=click.IntRange(min=1), default=None, help="Series term budget.")(func)
    func = click.option("--rel-tol", type=float, default=None, help="Relative truncation tolerance.")(func)
    return func


class ExitWith(Exception):
    def __init__(self, code: int):
        self.code = code


def _finish_eval(ctx, compute) -> None:
    cfg = _config(ctx)
    try:
        res = compute(_control(cfg))
    except (NoConvergence, QuadratureFailure) as exc:
        click.echo(f"error: {exc}", err=True)
        raise ExitWith(EXIT_NO_CONVERGENCE)
    except (SpecialFunctionError, ValueError, OverflowError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise ExitWith(EXIT_USAGE)
    emit([_result_row(res)], cfg["fmt"], single=True)
    if not res.converged:
        raise ExitWith(EXIT_NO_CONVERGENCE)


# ---------------------------------------------------------------- commands


@click.group()
@common_options
@click.version_option(package_name="artifact")
def cli(rel_tol, max_terms, fmt, seed):
    """Confluent hypergeometric products, E-functions and their integrals."""


@cli.group("eval")
@common_options
def eval_group(rel_tol, max_terms, fmt, seed):
    """Evaluate one function at one point."""


@eval_group.command("gamma")
@click.option("--z", "z", type=COMPLEX, required=True)
@common_options
@click.pass_context
def eval_gamma(ctx, z, **_):
    """Gamma(z)."""

    def compute(ctl):
        value = gamma(z)
        return EvalResult(value, GAMMA_REL_ERR * abs(value), 1, True)

    _finish_eval(ctx, compute)


@eval_group.command("pfq")
@click.option("--upper", type=PARAMS, required=True)
@click.option("--lower", type=PARAMS, required=True)
@click.option("--x", "x", type=COMPLEX, required=True)
@common_options
@click.pass_context
def eval_pfq(ctx, upper, lower, x, **_):
    """pFq(upper; lower; x) for p <= q."""
    _finish_eval(ctx, lambda ctl: pfq(upper, lower, x, ctl))


@eval_group.command("efun")
@click.option("--upper", type=PARAMS, required=True)
@click.option("--lower", type=PARAMS, required=True)
@click.option("--z", "z", type=COMPLEX, required=True)
@common_options
@click.pass_context
def eval_efun(ctx, upper, lower, z, **_):
    """MacRobert E(upper; lower; z)."""
    _finish_eval(ctx, lambda ctl: e_eval(EFunctionSpec(upper, lower, z), ctl))


@eval_group.command("kdf")
@click.option("--a1", type=COMPLEX, required=True)
@click.option("--b1", type=COMPLEX, required=True)
@click.option("--b2", type=COMPLEX, required=True)
@click.option("--c1", type=COMPLEX, required=True)
@click.option("--d1", type=COMPLEX, required=True)
@click.option("--d2", type=COMPLEX, required=True)
@click.option("--z1", type=COMPLEX, required=True)
@click.option("--z2", type=COMPLEX, required=True)
@common_options
@click.pass_context
def eval_kdf(ctx, a1, b1, b2, c1, d1, d2, z1, z2, **_):
    """Kampe de Feriet F^{1:1;1}_{1:1;1}."""
    _finish_eval(ctx, lambda ctl: kdf_eval(KdFSpec(a1, b1, b2, c1, d1, d2, z1, z2), ctl))


@eval_group.command("f2")
@click.option("--a", "a", type=COMPLEX, required=True)
@click.option("--b1", type=COMPLEX, required=True)
@click.option("--b2", type=COMPLEX, required=True)
@click.option("--c1", type=COMPLEX, required=True)
@click.option("--c2", type=COMPLEX, required=True)
@click.option("--x", "x", type=COMPLEX, required=True)
@click.option("--y", "y", type=COMPLEX, required=True)
@common_options
@click.pass_context
def eval_f2(ctx, a, b1, b2, c1, c2, x, y, **_):
    """Appell F2."""
    _finish_eval(ctx, lambda ctl: appell_f2(AppellF2Spec(a, b1, b2, c1, c2, x, y), ctl))


_PATHS = click.Choice(["auto", "kdf", "eseries", "integral"])


@eval_group.command("w")
@click.option("--alpha", type=COMPLEX, required=True)
@click.option("--beta", type=COMPLEX, required=True)
@click.option("--gamma", "gamma_", type=COMPLEX, required=True)
@click.option("--delta", type=COMPLEX, required=True)
@click.option("--z", "z", type=COMPLEX, required=True)
@click.option("--path", type=_PATHS, default="auto", show_default=True, help="Evaluation path.")
@common_options
@click.pass_context
def eval_w(ctx, alpha, beta, gamma_, delta, z, path, **_):
    """W(alpha, beta, gamma, delta; z)."""
    _finish_eval(ctx, lambda ctl: w_eval(WArgs(alpha, beta, gamma_, delta, z), ctl, path))


@cli.command("verify")
@click.option("--suite", type=click.Choice(list(SUITES) + ["all"]), default="all", show_default=True)
@click.option("--draws", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--tol", type=float, default=None, help="Residual tolerance (per-check defaults when omitted).")
@common_options
@click.pass_context
def verify(ctx, suite, draws, tol, **_):
    """Run identity and oracle checks on seeded random draws plus golden fixtures."""
    cfg = _config(ctx)
    checks = run_suite(suite, draws, cfg["seed"], tol, _control(cfg))
    rows = [
        {
            "check": c.name,
            "draws": c.count,
            "max_residual": float(c.max_residual),
            "tol": float(c.tol),
            "passed": c.passed,
        }
        for c in checks
    ]
    emit(rows, cfg["fmt"])
    failed = [c for c in checks if not c.passed]
    for c in failed:
        click.echo(f"FAIL {c.name}: first offending draw {_describe(c.failures[0])}", err=True)
    if failed:
        raise ExitWith(EXIT_VERIFY_FAILED)


def _describe(params: dict) -> str:
    return json.dumps({k: _cell(v) if not isinstance(v, (list, tuple)) else [_cell(x) for x in v]
                       for k, v in params.items()}, default=str)


@cli.group("table")
@common_options
def table_group(rel_tol, max_terms, fmt, seed):
    """Sweep one variable and tabulate the results."""


def _grid(start: float, stop: float, steps: int, log: bool) -> np.ndarray:
    if steps < 1:
        raise click.BadParameter("steps must be >= 1")
    if not start < stop:
        raise click.BadParameter("need start < stop")
    if log:
        if start <= 0:
            raise click.BadParameter("log grid needs start > 0")
        return np.geomspace(start, stop, steps)
    return np.linspace(start, stop, steps)


def _status_row(compute, ctl) -> dict:
    blank = {"value_re": math.nan, "value_im": math.nan, "abs_error_estimate": math.nan,
             "terms_used": 0, "converged": False}
    try:
        res = compute(ctl)
    except (NoConvergence, QuadratureFailure) as exc:
        return dict(blank, status=f"no_convergence: {exc}")
    except (SpecialFunctionError, ValueError, OverflowError) as exc:
        return dict(blank, status=f"error: {exc}")
    row = _result_row(res)
    row["status"] = "ok" if res.converged else "unconverged"
    return row


@table_group.command("w")
@click.option("--alpha", type=COMPLEX, required=True)
@click.option("--beta", type=COMPLEX, required=True)
@click.option("--gamma", "gamma_", type=COMPLEX, required=True)
@click.option("--delta", type=COMPLEX, required=True)
@click.option("--z-start", type=float, required=True)
@click.option("--z-stop", type=float, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--arg", "arg", type=float, default=0.0, show_default=True, help="arg z in radians.")
@click.option("--log", "log_grid", is_flag=True, help="Geometric grid in |z|.")
@click.option("--path", type=_PATHS, default="auto", show_default=True)
@common_options
@click.pass_context
def table_w(ctx, alpha, beta, gamma_, delta, z_start, z_stop, steps, arg, log_grid, path, **_):
    """W over |z| in [z-start, z-stop] along the ray arg z = --arg."""
    cfg = _config(ctx)
    ctl = _control(cfg)
    rows = []
    for r in _grid(z_start, z_stop, steps, log_grid):
        z = complex(r * math.cos(arg), r * math.sin(arg)) if arg else complex(r)
        row = {"alpha": alpha, "beta": beta, "gamma": gamma_, "delta": delta,
               "z_re": float(z.real), "z_im": float(z.imag)}
        row.update(_status_row(lambda c, z=z: w_eval(WArgs(alpha, beta, gamma_, delta, z), c, path), ctl))
        rows.append(row)
    emit(rows, cfg["fmt"])


@table_group.command("integral")
@click.option("--alpha", type=COMPLEX, required=True)
@click.option("--beta", type=COMPLEX, required=True)
@click.option("--gamma", "gamma_", type=COMPLEX, required=True)
@click.option("--l", "l", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--lambda", "lam", type=COMPLEX, default="i", show_default=True)
@click.option("--rho-start", type=float, required=True)
@click.option("--rho-stop", type=float, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--log", "log_grid", is_flag=True, help="Geometric grid in rho.")
@common_options
@click.pass_context
def table_integral(ctx, alpha, beta, gamma_, l, lam, rho_start, rho_stop, steps, log_grid, **_):
    """Closed-form integral over rho in [rho-start, rho-stop]."""
    cfg = _config(ctx)
    ctl = _control(cfg)
    rows = []
    for rho in _grid(rho_start, rho_stop, steps, log_grid):
        row = {"alpha": alpha, "beta": beta, "gamma": gamma_, "l": l, "lambda": lam, "rho": float(rho)}
        spec = IntegralSpec(alpha, beta, gamma_, l, float(rho), lam)
        row.update(_status_row(lambda c, spec=spec: integral_closed_general(spec, c), ctl))
        rows.append(row)
    emit(rows, cfg["fmt"])


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point; returns the process exit code instead of raising SystemExit."""
    try:
        cli.main(args=argv, prog_name="confhyp", standalone_mode=False)
    except ExitWith as exc:
        return exc.code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    return EXIT_OK


def run() -> None:
    sys.exit(main())
