"""``betacalc`` command line.

Every command reads a JSON run configuration::

    {"beta": {"family": "jackson", "q": 0.5},
     "tolerances": {"atol": 1e-12, "rtol": 1e-9, "k_max": 10000},
     "integrate": {"f": {"poly": [0, 1]}, "a": 0, "b": 1}}

Exit codes: 0 success, 1 malformed configuration or usage, 2 domain or
validation failure, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .beta_map import DEFAULT_TOL, BetaMap, Tolerances, validate
from .errors import BetaCalcError, ConfigError
from .functions import parse_function
from .quantum_calc import (
    LatticeFunction,
    beta_derivative,
    beta_integral,
    beta_inverse_derivative,
    make_support,
)
from .slp import SlpProblem, solve
from .special import KINDS, evaluate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- configuration ------------------------------------------------------------


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config ({exc.strerror})") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if not isinstance(cfg, dict):
        raise ConfigError(str(path), "top level must be an object")
    return cfg


def _block(cfg, name):
    if name not in cfg:
        raise ConfigError(name, "missing required block")
    block = cfg[name]
    if not isinstance(block, dict):
        raise ConfigError(name, "expected an object")
    return block


def _number(block, key, where, default=None):
    if key not in block:
        if default is not None:
            return default
        raise ConfigError(f"{where}.{key}", "missing required field")
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _pair(block, key, where):
    v = block.get(key)
    if not (isinstance(v, list) and len(v) == 2):
        raise ConfigError(f"{where}.{key}", "expected [c1, c2]")
    return tuple(_number({key: c}, key, where) for c in v)


def _function(block, key, where):
    if key not in block:
        raise ConfigError(f"{where}.{key}", "missing required field")
    return parse_function(block[key], f"{where}.{key}")


def _points(block, where):
    pts = block.get("points")
    if not isinstance(pts, list) or not pts:
        raise ConfigError(f"{where}.points", "expected a nonempty list of numbers")
    return [_number({"p": p}, "p", f"{where}.points[{i}]") for i, p in enumerate(pts)]


def _depth(block, where):
    if "depth" not in block:
        return None
    d = block["depth"]
    if isinstance(d, bool) or not isinstance(d, int):
        raise ConfigError(f"{where}.depth", f"expected an integer, got {d!r}")
    return d


def parse_common(cfg):
    beta = BetaMap.from_json(_block(cfg, "beta"))
    tol = DEFAULT_TOL
    if "tolerances" in cfg:
        t = cfg["tolerances"]
        if not isinstance(t, dict):
            raise ConfigError("tolerances", "expected an object")
        k_max = t.get("k_max", DEFAULT_TOL.k_max)
        if isinstance(k_max, bool) or not isinstance(k_max, int):
            raise ConfigError("tolerances.k_max", f"expected an integer, got {k_max!r}")
        tol = Tolerances(
            _number(t, "atol", "tolerances", DEFAULT_TOL.atol),
            _number(t, "rtol", "tolerances", DEFAULT_TOL.rtol),
            k_max,
        )
    return beta, tol


def parse_slp(cfg, beta, tol) -> SlpProblem:
    block = _block(cfg, "slp")
    ends = block.get("endpoints")
    if isinstance(ends, dict):
        b = _number(ends, "b", "slp.endpoints")
        a = _number(ends, "a", "slp.endpoints") if "a" in ends else None
    else:
        raise ConfigError("slp.endpoints", 'expected {"b": ...} or {"a": ..., "b": ...}')
    r = _function(block, "r", "slp") if "r" in block else parse_function({"constant": 0}, "slp.r")
    return SlpProblem(
        beta,
        b,
        a=a,
        r=r,
        bc_left=_pair(block, "bc_left", "slp"),
        bc_right=_pair(block, "bc_right", "slp"),
        tol=tol,
        depth=_depth(block, "slp"),
    )


# --- output helpers -----------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _table(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("t", "re_value", "im_value"))
    for t, v in rows:
        writer.writerow((repr(t), repr(v.real + 0.0), repr(v.imag + 0.0)))
    return buf.getvalue()


def _emit(text, out_dir, name):
    if out_dir is None:
        sys.stdout.write(text)
    else:
        (out_dir / name).write_text(text)


# --- commands -----------------------------------------------------------------


def cmd_validate(cfg, args) -> int:
    beta, tol = parse_common(cfg)
    report = validate(beta, tol=tol)
    text = _dumps(report.to_dict())
    sys.stdout.write(text)
    if args.out is not None:
        (args.out / "validation.json").write_text(text)
    return 0 if report.passed else 2


def cmd_integrate(cfg, args) -> int:
    beta, tol = parse_common(cfg)
    block = _block(cfg, "integrate")
    f = _function(block, "f", "integrate")
    a, b = _number(block, "a", "integrate"), _number(block, "b", "integrate")
    depth = _depth(block, "integrate")
    value, info = beta_integral(f, a, b, beta, tol, full_output=True, depth=depth)
    summary = {
        "value": value.real + 0.0,
        "value_imag": value.imag + 0.0,
        "tail_bound": info.tail_bound,
        "depth": info.depth,
    }
    text = _dumps(summary)
    sys.stdout.write(text)
    if args.out is not None:
        lo, hi = min(a, b), max(a, b)
        support = make_support(beta, lo, hi, tol, depth=depth) if a != b else None
        rows = LatticeFunction.sample(f, support, ghosts=False).to_csv() if support else ""
        (args.out / "lattice.csv").write_text(rows)
        (args.out / "summary.json").write_text(text)
    return 0


def cmd_diff(cfg, args) -> int:
    beta, tol = parse_common(cfg)
    block = _block(cfg, "diff")
    f = _function(block, "f", "diff")
    direction = block.get("direction", "forward")
    if direction == "forward":
        op = beta_derivative
    elif direction == "inverse":
        op = beta_inverse_derivative
    else:
        raise ConfigError("diff.direction", f"expected 'forward' or 'inverse', got {direction!r}")
    rows = [(t, op(f, t, beta, tol)) for t in _points(block, "diff")]
    _write_rows(rows, args, "derivative")
    return 0


def cmd_special(cfg, args) -> int:
    beta, tol = parse_common(cfg)
    block = _block(cfg, "special")
    kind = block.get("kind")
    if kind not in KINDS:
        raise ConfigError("special.kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    p = _function(block, "p", "special")
    rows = [(t, evaluate(kind, p, t, beta, tol)) for t in _points(block, "special")]
    _write_rows(rows, args, f"special_{kind}")
    return 0


def _write_rows(rows, args, stem):
    if args.json:
        text = _dumps([{"t": t, "value": [v.real + 0.0, v.imag + 0.0]} for t, v in rows])
        _emit(text, args.out, stem + ".json")
    else:
        _emit(_table(rows), args.out, stem + ".csv")


def cmd_slp(cfg, args) -> int:
    beta, tol = parse_common(cfg)
    problem = parse_slp(cfg, beta, tol)
    sol = solve(problem)
    modes = min(args.modes, len(sol.eigenfunctions))
    if args.json:
        sys.stdout.write(_dumps(sol.to_json(modes)))
    else:
        sys.stdout.write("".join(repr(float(x)) + "\n" for x in sol.eigenvalues))
    if args.out is not None:
        (args.out / "solution.json").write_text(_dumps(sol.to_json(modes)))
        for i in range(modes):
            (args.out / f"mode_{i}.csv").write_text(sol.eigenfunctions[i].to_csv())
    return 0


COMMANDS = {
    "validate": (cmd_validate, "check that the configured map is admissible"),
    "integrate": (cmd_integrate, "beta-integral of f over [a, b]"),
    "diff": (cmd_diff, "beta-derivative (or inverse-direction derivative) at points"),
    "special": (cmd_special, "beta-exponential or trigonometric function at points"),
    "slp": (cmd_slp, "eigenvalues and eigenfunctions of a Sturm-Liouville problem"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="betacalc", description="Quantum calculus on beta-lattices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path, help="JSON run configuration")
        p.add_argument("--out", type=Path, default=None, help="directory for output files")
        p.add_argument("--modes", type=int, default=4, help="eigenfunctions to export (slp)")
        p.add_argument("--json", action="store_true", help="JSON instead of CSV/plain text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.modes < 0:
        print("betacalc: error: --modes must be nonnegative", file=sys.stderr)
        return 1
    try:
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
        cfg = load_config(args.config)
        handler, _ = COMMANDS[args.command]
        return handler(cfg, args)
    except BetaCalcError as exc:
        kind = type(exc).__name__
        print(f"betacalc: {kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"betacalc: cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
