"""Command-line interface: ``tmellin {eval,table,poly,verify,expand,invert}``.

Settings resolve as flags > environment (TMELLIN_*) > JSON config file >
built-in defaults. Exit codes: 0 success, 1 verification failure or failed
table rows, 2 usage/range/unsupported errors, 3 divergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings
from dataclasses import dataclass

from . import functions as fn
from . import polyseq
from .asymptotics import (
    expansion,
    n_expansion_coefficients,
    n_twisted,
)
from .errors import DivergenceError, DomainError, TMellinError, TruncationWarning, UnsupportedError
from .quadrature import TransformValue, adaptive_transform, monte_carlo_oracle
from .transform import alpha_twisted, complex_closed_form, invert, twisted_mellin
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3
FORMATS = ("text", "json", "csv")
CSV_HEADER = ("s", "value", "error_estimate", "method")
CONFIG_ENV = "TMELLIN_CONFIG"
DEFAULT_CONFIG_NAME = "tmellin.json"

DEFAULTS = {
    "tol": 1e-10,
    "max_nodes": 512,
    "seed": 0,
    "format": "text",
    "samples": 100_000,
    "c": 1.0,
    "height": 40.0,
    "steps": 4000,
}
ENV_KEYS = {"tol": "TMELLIN_TOL", "max_nodes": "TMELLIN_MAX_NODES", "seed": "TMELLIN_SEED"}
CASTS = {"tol": float, "max_nodes": int, "seed": int, "format": str, "samples": int,
         "c": float, "height": float, "steps": int}

GRAMMAR = (
    "descriptor := name | name '(' arg (',' arg)* ')'; arg := number | descriptor. "
    "names: power(a) poly(c0,c1,..) const(c) exp_decay(c) geom todd log_power(n) "
    "sin(a) cos(a) rational_decay gaussian scaled(f,k) xpow(f,a) damped(f,c)"
)


class UsageError(TMellinError, ValueError):
    pass


class DescriptorError(UsageError):
    pass


# --- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class CliConfig:
    tol: float = 1e-10
    max_nodes: int = 512
    seed: int = 0
    format: str = "text"
    samples: int = 100_000
    c: float = 1.0
    height: float = 40.0
    steps: int = 4000

    def __post_init__(self):
        if not 1e-13 <= self.tol <= 1e-2:
            raise UsageError(f"tol must lie in [1e-13, 1e-2], got {self.tol}")
        if not 1 <= self.max_nodes <= 512:
            raise UsageError(f"max_nodes must lie in [1, 512], got {self.max_nodes}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")
        if self.samples < 1000:
            raise UsageError("samples must be >= 1000")


def _cast(key, value, source):
    try:
        return CASTS[key](value)
    except (TypeError, ValueError):
        raise UsageError(f"bad value {value!r} for {key} from {source}") from None


def load_config_file(path):
    """Read a JSON object of settings; unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise UsageError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return {k: _cast(k, v, path) for k, v in data.items()}


def resolve_config(flags: dict, environ=None, config_path=None) -> CliConfig:
    """Merge settings: flags > environment > config file > defaults."""
    environ = os.environ if environ is None else environ
    merged = dict(DEFAULTS)
    path = config_path or environ.get(CONFIG_ENV)
    if path is None and os.path.exists(DEFAULT_CONFIG_NAME):
        path = DEFAULT_CONFIG_NAME
    if path:
        merged.update(load_config_file(path))
    for key, var in ENV_KEYS.items():
        if environ.get(var):
            merged[key] = _cast(key, environ[var], var)
    for key, value in flags.items():
        if value is not None and key in merged:
            merged[key] = value
    return CliConfig(**merged)


# --- descriptor grammar ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<name>[a-z_][a-z0-9_]*)|(?P<sym>[(),]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DescriptorError(f"unexpected character at {pos} in {text!r}; {GRAMMAR}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def _build(name, args):
    nums = [a for a in args if not isinstance(a, fn.FunctionSpec)]
    subs = [a for a in args if isinstance(a, fn.FunctionSpec)]

    def want(n_num, n_sub=0):
        if len(nums) != n_num or len(subs) != n_sub or (n_sub and not isinstance(args[0], fn.FunctionSpec)):
            raise DescriptorError(f"wrong arguments for {name}; {GRAMMAR}")

    simple = {
        "geom": fn.Geom, "todd": fn.Todd, "rational_decay": fn.RationalDecay, "gaussian": fn.Gaussian,
    }
    if name in simple:
        want(0)
        return simple[name]()
    if name == "poly":
        if not nums or subs:
            raise DescriptorError(f"poly needs one or more coefficients; {GRAMMAR}")
        return fn.Poly(tuple(nums))
    one = {
        "power": fn.Power, "const": fn.Const, "exp_decay": fn.ExpDecay, "log_power": fn.LogPower,
        "sin": fn.Sine, "cos": fn.Cosine,
    }
    if name in one:
        want(1)
        return one[name](nums[0])
    combinators = {"scaled": fn.Scaled, "xpow": fn.ProductPower, "damped": fn.Damped}
    if name in combinators:
        want(1, 1)
        return combinators[name](subs[0], nums[0])
    raise DescriptorError(f"unknown function {name!r}; {GRAMMAR}")


def parse_descriptor(text: str) -> fn.FunctionSpec:
    """Parse e.g. ``"power(2.5)"``, ``"poly(1,0,3)"``, ``"scaled(todd,2)"``."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def parse_node():
        nonlocal pos
        kind, name = peek()
        if kind != "name":
            raise DescriptorError(f"expected a function name in {text!r}; {GRAMMAR}")
        pos += 1
        args = []
        if peek() == ("sym", "("):
            pos += 1
            while True:
                kind, val = peek()
                if kind == "num":
                    args.append(float(val))
                    pos += 1
                elif kind == "name":
                    args.append(parse_node())
                else:
                    raise DescriptorError(f"expected an argument in {text!r}; {GRAMMAR}")
                kind, val = peek()
                pos += 1
                if (kind, val) == ("sym", ")"):
                    break
                if (kind, val) != ("sym", ","):
                    raise DescriptorError(f"expected ',' or ')' in {text!r}; {GRAMMAR}")
        return _build(name, args)

    if not tokens:
        raise DescriptorError(f"empty function descriptor; {GRAMMAR}")
    try:
        spec = parse_node()
    except (DomainError, TypeError) as exc:
        raise DescriptorError(f"{exc}; {GRAMMAR}") from None
    if pos != len(tokens):
        raise DescriptorError(f"trailing input in {text!r}; {GRAMMAR}")
    return spec


# --- rendering ---------------------------------------------------------------


def fmt_float(x) -> str:
    """17 significant digits; lossless for doubles."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _text_table(header, rows):
    cells = [list(header)] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def render_table(header, rows, fmt):
    if fmt == "csv":
        return _csv_text(header, rows)
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    return _text_table(header, rows)


def render_record(record: dict, fmt: str, csv_keys=None) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        keys = csv_keys or list(record)
        return _csv_text(keys, [[_cell(record.get(k)) for k in keys]])
    width = max(len(k) for k in record)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in record.items())


def _cell(v):
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return "nan"
    return str(v)


# --- commands ----------------------------------------------------------------


def _transform(f, s, cfg, method="auto", alpha=1.0):
    if method == "monte_carlo":
        mean, se = monte_carlo_oracle(_weighted(f, alpha), s, samples=cfg.samples, seed=cfg.seed)
        return TransformValue(mean, se, cfg.samples, "monte_carlo")
    if method == "quadrature":
        return adaptive_transform(_weighted(f, alpha), s, tol=cfg.tol, max_nodes=cfg.max_nodes)
    return alpha_twisted(f, s, alpha, tol=cfg.tol, max_nodes=cfg.max_nodes)


def _weighted(f, alpha):
    return f if alpha == 1.0 else fn.Scaled(f, 1.0 / alpha)


def _transform_record(f, s, tv):
    return {
        "value": _json_float(tv.value),
        "error_estimate": _json_float(tv.error_estimate),
        "method": tv.method,
        "nodes_used": tv.nodes_used,
        "closed_form_available": bool(f.has_closed_form),
        "converged": bool(tv.converged),
    }


def cmd_eval(args, cfg, out):
    f = parse_descriptor(args.fn)
    tv = _transform(f, args.s, cfg, args.method, args.alpha)
    rec = _transform_record(f, args.s, tv)
    if cfg.format == "csv":
        out.write(_csv_text(CSV_HEADER, [[fmt_float(args.s), fmt_float(tv.value),
                                          fmt_float(tv.error_estimate), tv.method]]))
    else:
        out.write(render_record(rec, cfg.format))
    return EXIT_OK if tv.converged else EXIT_FAIL


def table_grid(start, end, step):
    if not step > 0:
        raise UsageError("step must be positive")
    if end < start:
        raise UsageError("s_start must not exceed s_end")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def table_rows(f, grid, cfg):
    """Rows of (s, value, error_estimate, method) and the worst exit code."""
    rows = []
    code = EXIT_OK
    for s in grid:
        try:
            tv = _transform(f, s, cfg)
            rows.append((s, tv.value, tv.error_estimate, tv.method))
            if not tv.converged:
                code = max(code, EXIT_FAIL)
        except DivergenceError:
            rows.append((s, math.nan, math.nan, "diverged"))
            code = EXIT_DIVERGENCE
        except TMellinError:
            rows.append((s, math.nan, math.nan, "error"))
            code = max(code, EXIT_FAIL)
    return rows, code


def cmd_table(args, cfg, out):
    f = parse_descriptor(args.fn)
    rows, code = table_rows(f, table_grid(args.s_start, args.s_end, args.step), cfg)
    if cfg.format == "json":
        out.write(json.dumps([{"s": s, "value": _json_float(v), "error_estimate": _json_float(e), "method": m}
                              for s, v, e, m in rows], indent=2) + "\n")
    else:
        text_rows = [[fmt_float(s), fmt_float(v), fmt_float(e), m] for s, v, e, m in rows]
        out.write(render_table(CSV_HEADER, text_rows, "csv" if cfg.format == "csv" else "text"))
    return code


def cmd_poly(args, cfg, out):
    n = args.n
    if args.kind == "f":
        if not 0 <= n <= 200:
            raise UsageError("f polynomials are available for 0 <= r <= 200")
        coeffs = list(polyseq.f_poly_recurrence(n).coefficients)
        if cfg.format == "json":
            out.write(json.dumps({"r": n, "coefficients": coeffs}) + "\n")
        elif cfg.format == "csv":
            out.write(_csv_text(["power", "coefficient"], [[i, c] for i, c in enumerate(coeffs)]))
        else:
            out.write(" ".join(str(c) for c in coeffs) + "\n")
    elif args.kind == "stirling":
        if not 1 <= n <= polyseq.STIRLING_MAX:
            raise UsageError(f"stirling rows are available for 1 <= n <= {polyseq.STIRLING_MAX}")
        row = polyseq.stirling_row(n)
        if cfg.format == "json":
            out.write(json.dumps({"n": n, "row": row}) + "\n")
        elif cfg.format == "csv":
            out.write(_csv_text(["k", "c"], [[k, c] for k, c in enumerate(row, start=1)]))
        else:
            out.write(" ".join(str(c) for c in row) + "\n")
    else:
        if not 1 <= n <= 200:
            raise UsageError("coefficient tables are available for 1 <= r <= 200")
        table = polyseq.coefficient_table(n)
        if cfg.format == "json":
            out.write(json.dumps({"rows": table}) + "\n")
        elif cfg.format == "csv":
            out.write(_csv_text(["r", "i", "a"], [[r, i, a] for r, row in enumerate(table) for i, a in enumerate(row)]))
        else:
            out.write("".join(f"{r}: " + " ".join(str(a) for a in row) + "\n" for r, row in enumerate(table)))
    return EXIT_OK


def cmd_verify(args, cfg, out):
    tol = args.tol if args.tol is not None else None
    checks = run_suite(args.suite, tol=tol, seed=cfg.seed)
    ok = all(c.passed for c in checks)
    if cfg.format == "json":
        out.write(json.dumps({"suite": args.suite, "passed": ok, "checks": [
            {"name": c.name, "max_residual": c.max_residual, "budget": c.budget, "passed": c.passed}
            for c in checks]}, indent=2) + "\n")
    elif cfg.format == "csv":
        out.write(_csv_text(["name", "max_residual", "budget", "status"],
                            [[c.name, fmt_float(c.max_residual), fmt_float(c.budget),
                              "PASS" if c.passed else "FAIL"] for c in checks]))
    else:
        out.write("".join(c.line() + "\n" for c in checks))
        out.write(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_expand(args, cfg, out):
    f = parse_descriptor(args.fn)
    if args.N is not None:
        coeffs = n_expansion_coefficients(f, args.s, args.order)
        truth = n_twisted(f, args.s, args.N, tol=cfg.tol).value if args.compare else None
        header = ["p", "coefficient", "partial_sum"] + (["n_twisted", "abs_error"] if args.compare else [])
        rows = []
        total = 0.0
        for p, c in enumerate(coeffs):
            total += c * args.N ** -p
            row = [p, fmt_float(c), fmt_float(total)]
            if args.compare:
                row += [fmt_float(truth), fmt_float(abs(total - truth))]
            rows.append(row)
    else:
        res = expansion(f, args.s, args.order)
        truth = adaptive_transform(f, args.s, tol=cfg.tol, max_nodes=cfg.max_nodes).value if args.compare else None
        header = ["r", "derivative", "f_r", "term", "partial_sum"] + (["quadrature", "abs_error"] if args.compare else [])
        rows = []
        for o, ps in zip(res.orders, res.partial_sums):
            row = [o.r, fmt_float(o.derivative_value), fmt_float(o.poly_value), fmt_float(o.term), fmt_float(ps)]
            if args.compare:
                row += [fmt_float(truth), fmt_float(abs(ps - truth))]
            rows.append(row)
    out.write(render_table(header, rows, cfg.format))
    return EXIT_OK


def cmd_invert(args, cfg, out):
    f = parse_descriptor(args.fn)
    mf = complex_closed_form(f)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        value = invert(mf, args.x, c=cfg.c, height=cfg.height, steps=cfg.steps)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    exact = f.exact_value(args.x)
    rec = {"x": float(args.x), "value": value, "exact": exact, "abs_error": abs(value - exact)}
    if cfg.format == "json":
        out.write(json.dumps(rec, indent=2) + "\n")
    else:
        out.write(render_record(rec, cfg.format))
    return EXIT_OK


# --- argument parsing --------------------------------------------------------


def _add_common(p, tol=True):
    p.add_argument("--format", choices=FORMATS, default=None, help="output format (default text)")
    if tol:
        p.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    p.add_argument("--max-nodes", type=int, default=None, dest="max_nodes", help="node cap, <= 512")
    p.add_argument("--seed", type=int, default=None, help="Monte Carlo seed")
    p.add_argument("--config", default=None, help="JSON settings file")


def build_parser():
    parser = argparse.ArgumentParser(prog="tmellin", description="Twisted Mellin transform toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate M f(s)")
    p.add_argument("--fn", required=True, help="function descriptor, e.g. 'power(2.5)'")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0, help="weight exp(-alpha x)")
    p.add_argument("--method", choices=("auto", "quadrature", "monte_carlo"), default="auto")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    _add_common(p)

    p = sub.add_parser("table", help="tabulate M f over an s grid")
    p.add_argument("--fn", required=True)
    p.add_argument("--s-start", type=float, required=True, dest="s_start")
    p.add_argument("--s-end", type=float, required=True, dest="s_end")
    p.add_argument("--step", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("poly", help="print exact polynomial and Stirling tables")
    p.add_argument("kind", choices=("f", "stirling", "coeffs"))
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--config", default=None)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=("identities", "catalog", "polyseq", "asymptotics", "all"))
    _add_common(p)

    p = sub.add_parser("expand", help="asymptotic expansion, optionally against quadrature")
    p.add_argument("--fn", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--compare", action="store_true")
    p.add_argument("--N", type=float, default=None, help="use the N-twisted transform and its 1/N expansion")
    _add_common(p)

    p = sub.add_parser("invert", help="recover f(x) from its closed-form transform")
    p.add_argument("--fn", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--c", type=float, default=None, help="contour abscissa")
    p.add_argument("--height", type=float, default=None, help="contour half-height")
    p.add_argument("--steps", type=int, default=None, help="trapezoid steps")
    _add_common(p, tol=False)
    return parser


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "poly": cmd_poly, "verify": cmd_verify,
            "expand": cmd_expand, "invert": cmd_invert}


def main(argv=None, out=None, environ=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: getattr(args, k, None) for k in DEFAULTS}
    if args.command == "verify":
        # a verify --tol sets check budgets, not the quadrature tolerance
        flags["tol"] = None
    try:
        cfg = resolve_config(flags, environ=environ, config_path=getattr(args, "config", None))
        return COMMANDS[args.command](args, cfg, out)
    except DivergenceError as exc:
        print(f"tmellin: divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (UsageError, DomainError, UnsupportedError, ValueError) as exc:
        print(f"tmellin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
