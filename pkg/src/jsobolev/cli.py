"""Command-line experiments: ``jsobolev <command> [flags]``.

Every command prints a one-line summary on stdout and writes its data
(CSV or JSON) to ``--out``; ``--out -`` sends the data to stdout instead.

CSV schemas (header row first, '\\n' line endings, 17 significant digits):

  eval         x, value
  coeffs       j, coeff
  partial-sum  n, error
  norms        p, value
  sweep-p      p, n, value, slope_window_flag
  asym         j, value
  kernel-check r, region, sup
  hardy-check  p, variant, value, finite
  window       p_lower, p_upper

JSON output is ``{experiment, params, grid, values, fit}`` (kernel-check
emits the region report instead).  Settings come from flags, then a JSON
``--config`` file, then ``JSOBOLEV_RESOLUTION``, then built-in defaults.
Exit status: 0 success, 2 invalid input, 1 numerical failure or
unwritable output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from decimal import Decimal, InvalidOperation

import numpy as np

from .analysis import (asym_ratio_check, conjugate, convergence_experiment, critical_window,
                       fit_growth)
from .bundles import parse_bundle
from .jacobi import JacobiParams
from .kernel import check_kernel_bound, hardy_supremum
from .quadrature import QuadratureError, jacobi_lp_norm
from .sobolev import SobolevParams, partial_sum, q_eval, q_sobolev_norm, sobolev_norm

COMMANDS = ("eval", "coeffs", "partial-sum", "norms", "sweep-p", "asym", "kernel-check",
            "hardy-check", "window")

# setting name -> built-in default; every setting can appear in a config file
DEFAULTS = {
    "alpha": 0.0, "beta": 0.0, "m": 1, "p": "2", "p_grid": None, "degrees": None,
    "n": 10, "f": "expx", "resolution": None, "r": "0.95,0.99", "out": None,
    "format": "csv", "k": None, "ell": None, "variant": "both", "grid": 80,
    "metric": "norm-product", "x_grid": "-1:1:0.1",
}

RESOLUTION_ENV = "JSOBOLEV_RESOLUTION"


class UsageError(ValueError):
    """Invalid command-line or configuration input (exit status 2)."""


def _num(text: str) -> Decimal:
    try:
        return Decimal(text.strip())
    except InvalidOperation:
        raise UsageError(f"not a number: {text!r}") from None


def parse_ladder(text, integer: bool = False) -> list:
    """Parse a value ladder.

    Accepted forms: a list (or comma string) of values; ``a:b:step``
    (arithmetic, inclusive); ``a:b:*r`` (geometric, inclusive);
    ``a,b,...,c`` which continues geometrically when ``b/a`` is an integer
    ratio that reaches ``c`` exactly, and arithmetically otherwise.
    """
    if isinstance(text, (list, tuple)):
        items = [Decimal(str(v)) for v in text]
    else:
        text = str(text).strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"range must look like a:b:step or a:b:*r, got {text!r}")
            lo, hi = _num(parts[0]), _num(parts[1])
            if parts[2].startswith("*"):
                ratio = _num(parts[2][1:])
                if ratio <= 1 or lo <= 0:
                    raise UsageError(f"geometric ladder needs ratio > 1 and start > 0: {text!r}")
                items, v = [], lo
                while v <= hi:
                    items.append(v)
                    v *= ratio
            else:
                step = _num(parts[2])
                if step <= 0:
                    raise UsageError(f"step must be positive: {text!r}")
                count = int((hi - lo) / step) + 1
                items = [lo + i * step for i in range(count)]
        else:
            tokens = [t.strip() for t in text.split(",") if t.strip()]
            if "..." in tokens:
                items = _expand_ellipsis(tokens, text)
            else:
                items = [_num(t) for t in tokens]
    if not items:
        raise UsageError(f"empty ladder: {text!r}")
    if integer:
        if any(v != v.to_integral_value() for v in items):
            raise UsageError(f"ladder must contain integers: {text!r}")
        return [int(v) for v in items]
    return [float(v) for v in items]


def _expand_ellipsis(tokens, text):
    if len(tokens) != 4 or tokens[2] != "...":
        raise UsageError(f"ellipsis ladders must look like a,b,...,c: {text!r}")
    a, b, c = _num(tokens[0]), _num(tokens[1]), _num(tokens[3])
    if a > 0 and b > a and b % a == 0:
        ratio, v, items = b / a, a, []
        while v < c:
            items.append(v)
            v *= ratio
        if v == c:
            return items + [c]
    step = b - a
    if step <= 0 or (c - a) % step != 0:
        raise UsageError(f"cannot continue ladder {text!r} to its last value")
    return [a + i * step for i in range(int((c - a) / step) + 1)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jsobolev", description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1], formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=COMMANDS)
    add = parser.add_argument
    # defaults are None so that config-file values can fill the gaps
    add("--alpha", type=float, help="Jacobi exponent at x = 1 (default 0)")
    add("--beta", type=float, help="Jacobi exponent at x = -1 (default 0)")
    add("--m", type=int, help="Sobolev order (default 1)")
    add("--p", help="exponent, or comma list for norms/hardy-check (default 2)")
    add("--p-grid", dest="p_grid", help="exponent ladder, e.g. 1.4:3.0:0.1")
    add("--degrees", help="degree ladder: list, a:b:*2 or a,b,...,c")
    add("--n", type=int, help="degree or truncation (default 10)")
    add("--f", help="test function: q<j>, poly:<c0,c1,..>, expx, onemx:<g>, sin:<k>")
    add("--resolution", type=int, help="quadrature node budget")
    add("--r", help="Abel parameter(s), comma list (default 0.95,0.99)")
    add("--k", type=int, help="derivative order k for asym (default m)")
    add("--ell", type=int, help="derivative order (eval default 0; asym default m)")
    add("--variant", choices=("standard", "adjoint", "both"), help="Hardy variant")
    add("--grid", type=int, help="angles per axis for kernel-check (default 80)")
    add("--metric", choices=("norm-product", "jacobi-lp"), help="sweep-p quantity")
    add("--x-grid", dest="x_grid", help="evaluation points for eval (default -1:1:0.1)")
    add("--out", help="output file ('-' for stdout)")
    add("--format", choices=("csv", "json"), help="data format (default csv)")
    add("--config", help="JSON file of settings (flags take precedence)")
    return parser


def resolve_settings(args: argparse.Namespace, environ=os.environ) -> dict:
    """Merge flags > config file > environment > defaults."""
    settings = dict(DEFAULTS)
    env = environ.get(RESOLUTION_ENV)
    if env is not None:
        try:
            settings["resolution"] = int(env)
        except ValueError:
            raise UsageError(f"{RESOLUTION_ENV} must be an integer, got {env!r}") from None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = sorted(set(data) - set(DEFAULTS) - {"command"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        if "command" in data and data["command"] != args.command:
            raise UsageError(f"config is for command {data['command']!r}, not {args.command!r}")
        settings.update({k: v for k, v in data.items() if k != "command"})
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    settings["command"] = args.command
    return settings


def _f17(x) -> str:
    return format(float(x), ".17g")


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return _f17(v)
    return str(v)


class Result:
    """Rows for CSV, a JSON document and a summary line."""

    def __init__(self, header, rows, summary, document):
        self.header, self.rows, self.summary, self.document = header, rows, summary, document

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.document, indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows([[_cell(v) for v in row] for row in self.rows])
        return buf.getvalue()


def _jsonable(x):
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    return x


def _doc(experiment, params, grid, values, fit=None):
    return {"experiment": experiment, "params": params, "grid": grid,
            "values": [_jsonable(v) for v in values], "fit": fit}


def _sp(s):
    try:
        return SobolevParams(float(s["alpha"]), float(s["beta"]), int(s["m"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _ps(s, key="p"):
    return parse_ladder(s[key])


def _check_resolution(s):
    res = s["resolution"]
    if res is not None and (int(res) != res or res < 8):
        raise UsageError(f"resolution must be an integer >= 8, got {res!r}")
    return None if res is None else int(res)


def _check_p(values, lo=1.0, allow_lo=True):
    for p in values:
        if not math.isfinite(p) or p < lo or (p == lo and not allow_lo):
            raise UsageError(f"exponent out of range: {p!r}")


def _degrees(s, default):
    ladder = parse_ladder(s["degrees"] if s["degrees"] is not None else default, integer=True)
    if any(b <= a for a, b in zip(ladder, ladder[1:])) or ladder[0] < 0:
        raise UsageError("degrees must be non-negative and strictly increasing")
    return ladder


def _base_params(sp):
    return {"alpha": sp.alpha, "beta": sp.beta, "m": sp.m}


def _plan_eval(s):
    sp = _sp(s)
    n, ell = int(s["n"]), int(s["ell"] or 0)
    if n < 0 or ell < 0:
        raise UsageError("n and ell must be non-negative")
    xs = parse_ladder(s["x_grid"])
    if any(abs(x) > 1 for x in xs):
        raise UsageError("evaluation points must lie in [-1, 1]")

    def run():
        vals = q_eval(sp, n, ell, np.array(xs))
        rows = list(zip(xs, vals))
        summary = f"q_{n}^({ell}) evaluated at {len(xs)} points, max |value| = {_f17(np.max(np.abs(vals)))}"
        params = dict(_base_params(sp), n=n, ell=ell)
        return Result(["x", "value"], rows, summary,
                      _doc("eval", params, {"x": xs}, list(vals)))
    return run


def _plan_coeffs(s):
    sp = _sp(s)
    n = int(s["n"])
    f = _bundle(s, sp)
    res = _check_resolution(s)

    def run():
        e = partial_sum(sp, f, n, res)
        rows = list(enumerate(e.coeffs))
        summary = f"{n + 1} coefficients of {f.name}, |c_{n}| = {_f17(abs(e.coeffs[-1]))}"
        params = dict(_base_params(sp), f=f.name, n=n, resolution=res)
        return Result(["j", "coeff"], rows, summary,
                      _doc("coeffs", params, {"j": list(range(n + 1))}, list(e.coeffs)))
    return run


def _bundle(s, sp):
    try:
        f = parse_bundle(str(s["f"]), sp)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if f.max_order is not None and f.max_order < sp.m:
        raise UsageError(f"{f.name} provides too few derivatives for m={sp.m}")
    return f


def _plan_partial_sum(s):
    sp = _sp(s)
    f = _bundle(s, sp)
    n = int(s["n"])
    if n < 0:
        raise UsageError("n must be non-negative")
    (p,) = _single_p(s)
    res = _check_resolution(s)

    def run():
        result = convergence_experiment(sp, f, p, list(range(n + 1)), res)
        rows = list(zip(result.truncations, result.errors))
        summary = (f"||S_n f - f|| for f={f.name}, n=0..{n}: final error "
                   f"{_f17(result.errors[-1])}, monotone={result.monotone}")
        fit = None if result.slope is None else {"slope": result.slope, "r2": None}
        params = dict(_base_params(sp), f=f.name, p=p, resolution=res)
        return Result(["n", "error"], rows, summary,
                      _doc("partial-sum", params, {"n": result.truncations},
                           list(result.errors), fit))
    return run


def _single_p(s):
    ps = _ps(s)
    if len(ps) != 1:
        raise UsageError("this command takes a single --p")
    _check_p(ps)
    return ps


def _plan_norms(s):
    sp = _sp(s)
    f = _bundle(s, sp)
    ps = _ps(s, "p_grid") if s["p_grid"] is not None else _ps(s)
    _check_p(ps)
    res = _check_resolution(s)

    def run():
        vals = [sobolev_norm(sp, f, p, res) for p in ps]
        summary = f"W^(p,{sp.m}) norms of {f.name} at {len(ps)} exponents"
        params = dict(_base_params(sp), f=f.name, resolution=res)
        return Result(["p", "value"], list(zip(ps, vals)), summary,
                      _doc("norms", params, {"p": ps}, vals))
    return run


def _plan_sweep_p(s):
    sp = _sp(s)
    ps = _ps(s, "p_grid") if s["p_grid"] is not None else _ps(s)
    _check_p(ps, allow_lo=False)
    degrees = _degrees(s, "16:1024:*2")
    if degrees[0] < 1:
        raise UsageError("sweep degrees must be positive")
    metric = s["metric"]
    if metric not in ("norm-product", "jacobi-lp"):
        raise UsageError(f"unknown metric {metric!r}")
    try:
        fit_growth(degrees, np.ones(len(degrees)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if metric == "norm-product":
        window = critical_window(sp.alpha, sp.beta, sp.m)
        inside = window.contains
    else:
        a = max(sp.alpha, sp.beta)
        crit = math.inf if 2 * a + 1 <= 0 else 4 * (a + 1) / (2 * a + 1)
        inside = lambda p: p < crit

    def run():
        table = np.empty((len(ps), len(degrees)))
        for j, n in enumerate(degrees):
            if metric == "norm-product":
                exps = list(ps) + [conjugate(p) for p in ps]
                norms = q_sobolev_norm(sp, n, exps)
                table[:, j] = norms[:len(ps)] * norms[len(ps):]
            else:
                table[:, j] = jacobi_lp_norm(JacobiParams(sp.alpha, sp.beta), n, ps)
        rows, fits = [], []
        for i, p in enumerate(ps):
            flag = "inside" if inside(p) else "outside"
            rows += [(p, n, table[i, j], flag) for j, n in enumerate(degrees)]
            fit = fit_growth(degrees, table[i])
            fits.append({"p": p, "slope": fit.exponent, "r2": fit.r2, "slope_window_flag": flag})
        slopes = " ".join(f"{f['p']:g}:{f['slope']:.3f}" for f in fits)
        summary = f"{metric} slopes by p: {slopes}"
        params = dict(_base_params(sp), metric=metric)
        doc = _doc("sweep-p", params, {"p": ps, "n": degrees},
                   [list(map(float, row)) for row in table], fits)
        return Result(["p", "n", "value", "slope_window_flag"], rows, summary, doc)
    return run


def _plan_asym(s):
    sp = _sp(s)
    k = sp.m if s["k"] is None else int(s["k"])
    ell = sp.m if s["ell"] is None else int(s["ell"])
    if not (0 <= k <= sp.m and 0 <= ell <= sp.m):
        raise UsageError(f"need 0 <= k, ell <= m = {sp.m}")
    degrees = _degrees(s, "10:10000:*10")

    def run():
        fit = asym_ratio_check(sp, k, ell, degrees)
        summary = f"scaled ratio (k={k}, ell={ell}) -> A = {_f17(fit.limit)}, B = {_f17(fit.first_order)}"
        params = dict(_base_params(sp), k=k, ell=ell)
        doc = _doc("asym", params, {"j": degrees}, list(fit.values),
                   {"limit": fit.limit, "first_order": _jsonable(fit.first_order)})
        return Result(["j", "value"], list(zip(degrees, fit.values)), summary, doc)
    return run


def _plan_kernel_check(s):
    sp = _sp(s)
    rs = parse_ladder(s["r"])
    grid = int(s["grid"])
    if grid < 2:
        raise UsageError("grid needs at least 2 angles per axis")
    if not (sp.alpha > 0 and sp.beta > 0):
        raise UsageError("kernel-check needs alpha, beta > 0")
    if any(not 0.9 <= r <= 0.995 for r in rs):
        raise UsageError("Abel parameters must lie in [0.9, 0.995]")

    def run():
        reports = [check_kernel_bound(sp.alpha, sp.beta, sp.m, r, grid, grid) for r in rs]
        rows = [(rep.r, i + 1, v) for rep in reports for i, v in enumerate(rep.region_sup)]
        worst = max(max(rep.region_sup) for rep in reports)
        summary = f"kernel bound on {grid}x{grid} grid, r in {rs}: max region sup {_f17(worst)}"
        dicts = [rep.to_dict() for rep in reports]
        doc = dicts[0] if len(dicts) == 1 else dicts
        return Result(["r", "region", "sup"], rows, summary, doc)
    return run


def _plan_hardy_check(s):
    ps = _ps(s, "p_grid") if s["p_grid"] is not None else _ps(s)
    _check_p(ps, allow_lo=False)
    alpha, beta = float(s["alpha"]), float(s["beta"])
    if not (alpha > 0 and beta > 0):
        raise UsageError("hardy-check needs alpha, beta > 0")
    variant = s["variant"]
    if variant not in ("standard", "adjoint", "both"):
        raise UsageError(f"unknown variant {variant!r}")
    variants = ("standard", "adjoint") if variant == "both" else (variant,)

    def run():
        rows = [(p, v, hardy_supremum(p, alpha, beta, v)) for p in ps for v in variants]
        rows = [(p, v, val, str(math.isfinite(val)).lower()) for p, v, val in rows]
        summary = f"Hardy suprema at alpha={alpha:g}, beta={beta:g}: " + " ".join(
            f"{v}(p={p:g})={val:.6g}" for p, v, val, _ in rows)
        doc = _doc("hardy-check", {"alpha": alpha, "beta": beta},
                   {"p": ps, "variant": list(variants)}, [r[2] for r in rows])
        return Result(["p", "variant", "value", "finite"], rows, summary, doc)
    return run


def _plan_window(s):
    sp = _sp(s)

    def run():
        w = critical_window(sp.alpha, sp.beta, sp.m)
        summary = f"p_lower={w.p_lower!r} p_upper={w.p_upper!r}"
        doc = _doc("window", _base_params(sp), {}, [w.p_lower, w.p_upper])
        doc["exact"] = {"p_lower": str(w.lower_exact),
                        "p_upper": None if w.upper_exact is None else str(w.upper_exact)}
        return Result(["p_lower", "p_upper"], [(w.p_lower, w.p_upper)], summary, doc)
    return run


PLANS = {
    "eval": _plan_eval, "coeffs": _plan_coeffs, "partial-sum": _plan_partial_sum,
    "norms": _plan_norms, "sweep-p": _plan_sweep_p, "asym": _plan_asym,
    "kernel-check": _plan_kernel_check, "hardy-check": _plan_hardy_check,
    "window": _plan_window,
}


def run(settings: dict) -> Result:
    """Validate ``settings`` completely, then compute."""
    if settings.get("format") not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {settings.get('format')!r}")
    try:
        job = PLANS[settings["command"]](settings)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return job()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        result = run(settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"jsobolev: error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"jsobolev: numerical failure: {exc}", file=sys.stderr)
        return 1
    text = result.render(settings["format"])
    out = settings["out"]
    if out and out != "-":
        try:
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"jsobolev: cannot write {out!r}: {exc}", file=sys.stderr)
            return 1
    print(result.summary)
    if out == "-":
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
