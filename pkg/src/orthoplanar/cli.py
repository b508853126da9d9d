"""Command-line front end: ``orthoplanar {simulate,analytic,verify}``.

Exit codes: 0 success, 1 a gated verification check failed, 2 usage error.
Any long flag may also come from ``--config FILE`` (``key = value`` lines);
flags on the command line win.  ``ORTHOPLANAR_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import analytic as an
from . import verify as vf
from .core import OrthoPlanarError, validate_params
from .sim import export_trajectory, write_rows

SEED_ENV = "ORTHOPLANAR_SEED"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- config and parsing

def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys use ``-`` or ``_``."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_values(text: str) -> list[float]:
    """``"0.5"``, ``"0.5,1,2"`` or ``"lo:hi:n"`` (``n`` evenly spaced points, both ends included)."""
    vals: list[float] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = part.split(":")
            if len(bits) != 3:
                raise argparse.ArgumentTypeError(f"range must be lo:hi:n, got {part!r}")
            lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
            if n < 1:
                raise argparse.ArgumentTypeError("range needs n >= 1")
            vals += [float(v) for v in np.linspace(lo, hi, n)]
        else:
            vals.append(float(part))
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def _values(text):
    try:
        return parse_values(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_model_flags(p: argparse.ArgumentParser, grid: bool = False) -> None:
    kind = dict(type=_values) if grid else dict(type=float)
    p.add_argument("--lambda", dest="lam", metavar="LAMBDA", help="event rate", **kind)
    p.add_argument("--c", help="speed", **kind)
    p.add_argument("--p", help="counter-clockwise turn probability", **kind)
    p.add_argument("--q", help="clockwise turn probability", **kind)
    p.add_argument("--t", help="time horizon", **kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthoplanar", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="write sample trajectories as CSV")
    _add_model_flags(sp)
    sp.add_argument("--n-paths", type=int, help="number of paths (default 1)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="output directory, or output file with --concat ('-' for stdout)")
    sp.add_argument("--concat", action="store_true", default=None, help="one file with a path column")
    sp.add_argument("--triangle", action="store_true", default=None, help="also write the (T, Y) replay")
    sp.add_argument("--triangle-out", help="file for the concatenated replay (default <out>_triangle.csv)")
    sp.add_argument("--threads", type=int)
    sp.add_argument("--config")

    ap = sub.add_parser("analytic", help="tabulate a closed-form quantity over a grid")
    ap.add_argument("--fn", choices=sorted(FUNCTIONS), help="quantity to evaluate")
    _add_model_flags(ap, grid=True)
    for name in ARG_NAMES:
        ap.add_argument(f"--{name}", type=_values, help=f"values of {name} (list or lo:hi:n)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", help="output file (default stdout)")
    ap.add_argument("--config")

    vp = sub.add_parser("verify", help="run the verification suite, emit a JSON report")
    vp.add_argument("--suite", choices=vf.SUITES + ("all",))
    vp.add_argument("--seed", type=int)
    vp.add_argument("--n", type=int, help="replications for the Monte Carlo suites")
    mode = vp.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=None, help="exit 1 on failure (default)")
    mode.add_argument("--survey", dest="strict", action="store_false", help="always exit 0")
    vp.add_argument("--threads", type=int)
    vp.add_argument("--out", help="report file (default stdout)")
    vp.add_argument("--config")
    return parser


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _apply_config(parser: argparse.ArgumentParser, sub: argparse.ArgumentParser, args, argv):
    cfg = read_config(args.config)
    defaults = {}
    actions = {a.dest: a for a in sub._actions}
    alias = {"lambda": "lam", "strict": "strict", "survey": "strict"}
    for key, raw in cfg.items():
        dest = alias.get(key, key)
        if dest not in actions or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        act = actions[dest]
        if act.type is None and act.nargs == 0:
            val = _BOOL.get(raw.lower())
            if val is None:
                raise UsageError(f"config key {key!r} expects a boolean")
            if key == "survey":
                val = not val
        elif act.type is not None:
            try:
                val = act.type(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from None
        else:
            val = raw
        if act.choices is not None and val not in act.choices:
            raise UsageError(f"config key {key!r}: invalid choice {val!r}")
        defaults[dest] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + ("lambda" if n == "lam" else n.replace("_", "-")) for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


# ---------------------------------------------------------------- simulate

def path_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def cmd_simulate(args) -> int:
    _need(args, "lam", "c", "p", "q", "t")
    params = validate_params(args.lam, args.c, args.p, args.q)
    if not args.t > 0:
        raise UsageError("--t must be > 0")
    n = 1 if args.n_paths is None else args.n_paths
    if n < 1:
        raise UsageError("--n-paths must be >= 1")
    seed = _seed(args)
    threads = args.threads or os.cpu_count() or 1

    def one(i):
        return export_trajectory(params, args.t, path_generator(seed, i))

    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajs = list(pool.map(one, range(n)))
    else:
        trajs = [one(i) for i in range(n)]

    width = max(4, len(str(n - 1)))
    out = "." if args.out is None else args.out
    if args.concat:
        buf = io.StringIO()
        for i, tr in enumerate(trajs):
            write_rows(buf, ["t", "x", "y", "dir"], tr.breakpoints, path_id=i, write_header=i == 0)
        _emit(out, buf.getvalue())
        if args.triangle:
            tri_out = args.triangle_out
            if tri_out is None:
                if out == "-":
                    raise UsageError("--triangle with --concat to stdout needs --triangle-out")
                tri_out = str(Path(out).with_suffix("")) + "_triangle.csv"
            buf = io.StringIO()
            for i, tr in enumerate(trajs):
                write_rows(buf, ["t", "s", "y"], tr.triangle(), path_id=i, write_header=i == 0)
            _emit(tri_out, buf.getvalue())
        return 0
    if out == "-":
        raise UsageError("per-path output needs a directory; use --concat to write to stdout")
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    for i, tr in enumerate(trajs):
        buf = io.StringIO()
        tr.to_csv(buf)
        _write_file(d / f"path_{i:0{width}d}.csv", buf.getvalue())
        if args.triangle:
            buf = io.StringIO()
            write_rows(buf, ["t", "s", "y"], tr.triangle())
            _write_file(d / f"triangle_{i:0{width}d}.csv", buf.getvalue())
    return 0


def _write_file(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _emit(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        _write_file(Path(out), text)


# ---------------------------------------------------------------- analytic

ARG_NAMES = ("alpha", "beta", "eta", "x", "y", "s")


def _hydro_row(pr, t, s, y):
    res = an.joint_hydro_limit(pr, t, s, y)
    return {"density_y": res.density_y, "s_star": res.s_star, "variance": res.variance}


# name -> (callable(params, t, *args) -> value or dict, argument names, needs t)
FUNCTIONS: dict[str, tuple[Callable, tuple[str, ...], bool]] = {
    "prob_boundary": (an.prob_boundary, (), True),
    "prob_side_interior": (an.prob_side_interior, (), True),
    "side_density": (an.side_density, ("eta",), True),
    "side_charfn": (an.side_charfn, ("alpha",), True),
    "prob_diagonals": (an.prob_diagonals, (), True),
    "prob_diag_interior": (an.prob_diag_interior, (), True),
    "diag_density": (an.diag_density, ("x",), True),
    "diag_charfn": (an.diag_charfn, ("alpha",), True),
    "interior_charfn_noref": (an.interior_charfn_noref, ("alpha", "beta"), True),
    "hydro_coeff": (lambda pr: {"D": an.hydro_coeff(pr.p, pr.q).D}, (), False),
    "t_endpoint_mass": (an.t_endpoint_mass, (), True),
    "t_density": (an.t_density, ("s",), True),
    "t_charfn": (an.t_charfn, ("alpha",), True),
    "oblique_prob_noref": (an.oblique_prob_noref, (), True),
    "oblique_density_noref": (an.oblique_density_noref, ("s",), True),
    "oblique_charfn_noref": (an.oblique_charfn_noref, ("alpha",), True),
    "oblique_charfn_pq": (an.oblique_charfn_pq, ("alpha",), True),
    "oblique_prob_pq": (an.oblique_prob_pq, (), True),
    "vertical_side_density": (an.vertical_side_density, ("y",), True),
    "vertical_side_charfn": (an.vertical_side_charfn, ("beta",), True),
    "joint_hydro_limit": (_hydro_row, ("s", "y"), True),
}

_COMPLEX_FNS = {k for k in FUNCTIONS if "charfn" in k}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def analytic_table(fn: str, grid: dict[str, list[float]]) -> tuple[list[str], list[dict]]:
    """Evaluate ``fn`` on the cartesian product of ``grid``; returns (columns, rows)."""
    func, arg_names, needs_t = FUNCTIONS[fn]
    keys = ["lambda", "c", "p", "q"] + (["t"] if needs_t else []) + list(arg_names)
    value_cols = ["re", "im"] if fn in _COMPLEX_FNS else None
    rows = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        row = dict(zip(keys, combo))
        err = ""
        result = None
        try:
            pr = validate_params(row["lambda"], row["c"], row["p"], row["q"])
            result = func(pr, *(row[k] for k in keys[4:])) if keys[4:] else func(pr)
        except (OrthoPlanarError, ValueError, OverflowError, ArithmeticError) as exc:
            err = f"{type(exc).__name__}: {exc}"
        if isinstance(result, dict):
            value_cols = value_cols or list(result)
            row.update(result)
        elif fn in _COMPLEX_FNS:
            row.update({"re": None, "im": None} if result is None else {"re": result.real, "im": result.imag})
        else:
            value_cols = ["value"]
            row["value"] = None if result is None else float(result)
        row["error"] = err
        rows.append(row)
    if value_cols is None:
        value_cols = ["value"]
    for row in rows:
        for col in value_cols:
            row.setdefault(col, None)
    return keys + value_cols + ["error"], rows


def cmd_analytic(args) -> int:
    _need(args, "fn")
    func, arg_names, needs_t = FUNCTIONS[args.fn]
    if args.fn == "hydro_coeff":
        # only p and q matter; the model flags still index the rows
        for k, default in (("lam", [1.0]), ("c", [1.0])):
            if getattr(args, k) is None:
                setattr(args, k, default)
    _need(args, "lam", "c", "p", "q", *(["t"] if needs_t else []), *arg_names)
    grid = {"lambda": args.lam, "c": args.c, "p": args.p, "q": args.q, "t": args.t}
    grid.update({k: getattr(args, k) for k in ARG_NAMES})
    cols, rows = analytic_table(args.fn, grid)
    fmt = args.format or "csv"
    if fmt == "json":
        text = json.dumps([{k: r[k] if r[k] != "" or k != "error" else None for k in cols} for r in rows],
                          indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(r[k]) if k != "error" else _csv_text(r[k]) for k in cols) + "\n")
        text = buf.getvalue()
    _emit(args.out, text)
    return 0


def _csv_text(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    suite = args.suite or "all"
    threads = args.threads or os.cpu_count() or 1
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be >= 1")
    results = vf.run_suite(suite, seed=_seed(args), n=args.n, threads=threads)
    _emit(args.out, vf.report_json(results))
    strict = True if args.strict is None else args.strict
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAIL {r.check} [{r.statistic}] expected={r.expected!r} observed={r.observed!r} "
              f"tolerance={r.tolerance!r} params={r.params}", file=sys.stderr)
    return 1 if (strict and failed) else 0


COMMANDS = {"simulate": cmd_simulate, "analytic": cmd_analytic, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            sub = parser._subparsers._group_actions[0].choices[args.command]
            try:
                args = _apply_config(parser, sub, args, argv)
            except SystemExit as exc:
                return int(exc.code or 0)
        return COMMANDS[args.command](args)
    except (UsageError, OrthoPlanarError) as exc:
        print(f"orthoplanar {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
