"""Command-line front end: ``frac-gelfand <command> [flags]``.

Settings resolve as flags > FGL_* environment variables > ``--config``
file (key=value lines) > built-in defaults.  Exit codes: 0 success,
1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .constants import Params, constants_bundle
from .errors import DomainError, FracGelfandError
from .quadrature import QuadSpec
from .stability import Outcome, classify, phase_diagram, stability_boundary
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "n": None,
    "s": None,
    "abs_tol": 1e-10,
    "rel_tol": 1e-9,
    "root_tol": 1e-10,
    "tie_tol": 0.0,
    "format": "text",
    "out": None,
    "seed": 0,
}
CASTS = {
    "n": int,
    "s": float,
    "abs_tol": float,
    "rel_tol": float,
    "root_tol": float,
    "tie_tol": float,
    "format": str,
    "out": str,
    "seed": int,
}
ENV_PREFIX = "FGL_"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int | None
    s: float | None
    abs_tol: float
    rel_tol: float
    root_tol: float
    tie_tol: float
    format: str
    out: str | None
    seed: int

    def params(self, default_n=None, default_s=None) -> Params:
        n = self.n if self.n is not None else default_n
        s = self.s if self.s is not None else default_s
        if n is None or s is None:
            raise UsageError("both --n and --s are required")
        return Params(n, s)

    def spec(self) -> QuadSpec:
        return QuadSpec(abs_tol=self.abs_tol, rel_tol=self.rel_tol)


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                key, value = (x.strip() for x in line.split("=", 1))
                key = key.replace("-", "_").lower()
                if key not in DEFAULTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    return values


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None and env != "":
            merged[key] = env
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    out = {}
    for key, val in merged.items():
        if val is None:
            out[key] = None
            continue
        try:
            out[key] = CASTS[key](val)
        except (TypeError, ValueError):
            raise UsageError(f"invalid value for {key}: {val!r}") from None
    if out["format"] not in ("text", "json", "csv"):
        raise UsageError(f"unknown format {out['format']!r}")
    return RunConfig(**out)


def fmt(x: float) -> str:
    """Fixed 12 decimals for moderate magnitudes, scientific otherwise."""
    ax = abs(x)
    if ax == 0 or 1e-3 <= ax < 1e6:
        return f"{x:.12f}"
    return f"{x:.12e}"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_constants(cfg: RunConfig) -> int:
    b = constants_bundle(cfg.params())
    d = b.as_dict()
    if cfg.format == "json":
        text = json.dumps({"params": {"n": b.params.n, "s": b.params.s}, **d}, sort_keys=True, indent=2) + "\n"
    elif cfg.format == "csv":
        text = "name,value\n" + "".join(f"{k},{v!r}\n" for k, v in d.items())
    else:
        text = "".join(f"{k} = {fmt(v)}\n" for k, v in d.items())
    _emit(text, cfg)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    p = cfg.params()
    v = classify(p, cfg.tie_tol)
    if cfg.format == "json":
        text = json.dumps({"n": p.n, "s": p.s, "margin": v.margin, "verdict": str(v.verdict)},
                          sort_keys=True, indent=2) + "\n"
    elif cfg.format == "csv":
        text = f"n,s,margin,verdict\n{p.n},{p.s!r},{v.margin!r},{v.verdict}\n"
    else:
        text = f"margin = {fmt(v.margin)}\nverdict = {v.verdict}\n"
    _emit(text, cfg)
    return EXIT_OK


def cmd_boundary(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("--n is required")
    res = stability_boundary(cfg.n, cfg.root_tol)
    if cfg.format == "json":
        text = json.dumps(res.as_dict(), sort_keys=True, indent=2) + "\n"
    elif cfg.format == "csv":
        text = "n,outcome,s_star\n" + f"{res.n},{res.outcome},{'' if res.s_star is None else repr(res.s_star)}\n"
    else:
        text = f"n = {res.n}\noutcome = {res.outcome}\n"
        if res.outcome is Outcome.ROOT:
            text += f"s_star = {fmt(res.s_star)}\n"
    _emit(text, cfg)
    return EXIT_OK


def phase_diagram_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "s", "margin", "verdict"])
    for r in rows:
        w.writerow([r.n, repr(r.s), repr(r.margin), str(r.verdict)])
    return buf.getvalue()


def cmd_phase_diagram(cfg: RunConfig, args) -> int:
    rows = phase_diagram(args.n_lo, args.n_hi, args.s_steps, cfg.tie_tol)
    if cfg.format == "json":
        text = json.dumps([{"n": r.n, "s": r.s, "margin": r.margin, "verdict": str(r.verdict)} for r in rows],
                          sort_keys=True, indent=2) + "\n"
    else:
        text = phase_diagram_csv(rows)
    _emit(text, cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    p = cfg.params(default_n=3, default_s=0.5)
    report = run_suite(args.suite, p, cfg.spec(), cfg.seed)
    if cfg.format == "json":
        _emit(report.to_json(), cfg)
    else:
        _emit(report.to_text(), cfg)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="space dimension")
    common.add_argument("--s", type=float, help="fractional order in (0,1)")
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--root-tol", dest="root_tol", type=float)
    common.add_argument("--tie-tol", dest="tie_tol", type=float)
    common.add_argument("--format", choices=["text", "json", "csv"])
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="key=value settings file")

    parser = argparse.ArgumentParser(prog="frac-gelfand", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="print every closed-form constant")
    sub.add_parser("classify", parents=[common], help="stability verdict of the singular solution")
    sub.add_parser("boundary", parents=[common], help="critical order s* for dimension n")
    pd = sub.add_parser("phase-diagram", parents=[common], help="verdict table as CSV")
    pd.add_argument("--n-lo", dest="n_lo", type=int, default=3)
    pd.add_argument("--n-hi", dest="n_hi", type=int, default=12)
    pd.add_argument("--s-steps", dest="s_steps", type=int, default=9)
    vf = sub.add_parser("verify", parents=[common], help="run verification suites")
    vf.add_argument("--suite", choices=["all", *SUITES], default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        if args.command == "constants":
            return cmd_constants(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "boundary":
            return cmd_boundary(cfg)
        if args.command == "phase-diagram":
            return cmd_phase_diagram(cfg, args)
        if args.command == "verify":
            return cmd_verify(cfg, args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracGelfandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
