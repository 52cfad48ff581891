"""Command-line interface: kernel samples, transforms, suite runs and report tables.

    lcdunkl [--seed N] [--quad-tol T] kernel    --k K (--matrix a,b,c,d | --theta T) --x X
                                                [--lambda-range LO:HI:N]
    lcdunkl [--seed N] [--quad-tol T] transform (--signal FAMILY:key=val,... | --input CSV)
                                                --k K (--matrix ... | --theta T)
                                                [--grid LO:HI:N] [--out CSV]
    lcdunkl [--seed N] [--quad-tol T] verify    [--config JSON] [--out JSON]
                                                [--manifest JSON] [--progress]
    lcdunkl report --in JSON

Exit codes: 0 success, 1 a violated inequality, 2 invalid input, 3 quadrature
did not converge.  Numbers are written with 17 significant digits.  No
environment variables are read.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import platform
import sys
import tempfile
from dataclasses import replace
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np
import scipy
from scipy.interpolate import CubicSpline

from . import __version__
from .corpus import FAMILIES, CorpusEntry, corpus_default, corpus_manifest, make_signal
from .errors import LcdunklError, NonConvergence
from .harness import SUITE_MATRICES, SUITE_ORDERS, SuiteConfig, run_suite
from .measure import IntervalSet, QuadratureSpec, Signal
from .special import as_order
from .transform import CanonicalMatrix, default_grid, fractional_matrix, lcdt_forward, lcdt_kernel

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

CONFIG_KEYS = {"seed", "orders", "matrices", "exponents", "s_values", "gaussian_t",
               "miyachi_s", "cowling_price", "eta", "set_fraction", "families", "signals",
               "quadrature", "output"}
QUAD_KEYS = {"rel_tol", "panels", "nodes_per_panel", "radius"}


class UsageError(Exception):
    """Invalid flags, config or input file; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Formatting and files
# ---------------------------------------------------------------------------

def fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(rows, header: Sequence[str], out: Optional[str]) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    if out is None or out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        atomic_write(out, buf.getvalue())


def atomic_write(path: str, text: str) -> None:
    """Write to a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".lcdunkl-", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_safe(obj):
    """Replace non-finite floats by strings so the document is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return v
    if isinstance(obj, complex):
        return [json_safe(obj.real), json_safe(obj.imag)]
    return obj


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def content_hash(doc: dict) -> str:
    """SHA-256 of the document with meta.timestamp and the hash itself removed."""
    meta = {k: v for k, v in doc.get("meta", {}).items()
            if k not in ("timestamp", "content_sha256")}
    body = dict(doc, meta=meta)
    return hashlib.sha256(dumps(body).encode()).hexdigest()


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------

def parse_order(v) -> float:
    try:
        return as_order(float(v))
    except (TypeError, ValueError, LcdunklError) as exc:
        raise UsageError(f"invalid order k={v!r}: {exc}") from None


def parse_matrix(spec) -> CanonicalMatrix:
    """A theta (number) or four entries (list, or 'a,b,c,d' string)."""
    try:
        if isinstance(spec, (int, float)) and not isinstance(spec, bool):
            return fractional_matrix(float(spec))
        if isinstance(spec, str):
            spec = [float(t) for t in spec.split(",")]
        vals = [float(t) for t in spec]
        if len(vals) != 4:
            raise ValueError("need four entries a,b,c,d")
        return CanonicalMatrix(*vals)
    except (TypeError, ValueError, LcdunklError) as exc:
        raise UsageError(f"invalid matrix {spec!r}: {exc}") from None


def matrix_from_args(args) -> CanonicalMatrix:
    if args.theta is not None:
        return parse_matrix(args.theta)
    if args.matrix is not None:
        return parse_matrix(args.matrix)
    raise UsageError("one of --matrix or --theta is required")


def parse_range(text: str) -> np.ndarray:
    """LO:HI:N -> N equispaced points (N = 0 gives an empty grid)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"range must be LO:HI:N, got {text!r}") from None
    if n < 0 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"invalid range {text!r}")
    if n > 1 and not hi > lo:
        raise UsageError(f"range {text!r} needs HI > LO")
    return np.linspace(lo, hi, n)


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_signal(spec: str, seed: Optional[int] = None) -> Signal:
    """FAMILY:key=val,key=val, e.g. gaussian:s=1 or indicator:r=2."""
    family, _, rest = spec.partition(":")
    family = family.strip()
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise UsageError(f"signal parameter {item!r} is not key=value")
            try:
                params[key.strip()] = _number(val.strip())
            except ValueError:
                raise UsageError(f"signal parameter {item!r} is not numeric") from None
    if family == "zero":
        return zero_signal()
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from zero, {', '.join(FAMILIES)}")
    try:
        return make_signal(family, params, seed if family == "random_trig_bump" else None)
    except (TypeError, ValueError, LcdunklError) as exc:
        raise UsageError(f"invalid signal {spec!r}: {exc}") from None


def zero_signal() -> Signal:
    return Signal(lambda x: np.zeros(np.shape(x), complex), 1.0, "zero",
                  support=IntervalSet.symmetric(1.0))


def read_samples(path: str) -> tuple:
    """x, re, im columns; an optional non-numeric header line is skipped."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    data = []
    for i, row in enumerate(rows):
        try:
            vals = [float(c) for c in row]
        except ValueError:
            if i == 0:
                continue
            raise UsageError(f"{path}: line {i + 1} is not numeric") from None
        if len(vals) != 3:
            raise UsageError(f"{path}: line {i + 1} needs three columns x,re,im")
        data.append(vals)
    if len(data) < 4:
        raise UsageError(f"{path}: need at least four samples")
    arr = np.array(data)
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{path}: non-finite sample")
    if np.any(np.diff(arr[:, 0]) <= 0):
        raise UsageError(f"{path}: x must be strictly increasing")
    return arr[:, 0], arr[:, 1], arr[:, 2]


def sampled_signal(x: np.ndarray, re: np.ndarray, im: np.ndarray, label: str = "samples"
                   ) -> Signal:
    """Cubic-spline interpolant of the samples, zero outside [x_0, x_n]."""
    spl_re = CubicSpline(x, re)
    spl_im = CubicSpline(x, im)
    lo, hi = float(x[0]), float(x[-1])

    def func(t):
        t = np.asarray(t, dtype=float)
        inside = (t >= lo) & (t <= hi)
        tc = np.clip(t, lo, hi)
        return np.where(inside, spl_re(tc) + 1j * spl_im(tc), 0.0)

    step = float(np.min(np.diff(x)))
    # knots are breaks: each cubic piece is then integrated without a kink
    return Signal(func, max(abs(lo), abs(hi)), label, support=IntervalSet(((lo, hi),)),
                  breaks=tuple(float(v) for v in x), bandwidth=math.pi / step)


def quad_from(args, overrides: Optional[dict] = None) -> QuadratureSpec:
    q = QuadratureSpec()
    try:
        if overrides:
            q = replace(q, **overrides)
        if args.quad_tol is not None:
            q = replace(q, rel_tol=float(args.quad_tol))
    except (TypeError, ValueError, LcdunklError) as exc:
        raise UsageError(f"invalid quadrature settings: {exc}") from None
    return q


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

def _float_list(cfg: dict, key: str, default) -> tuple:
    val = cfg.get(key, default)
    if not isinstance(val, (list, tuple)) or not val:
        raise UsageError(f"config {key!r} must be a non-empty list")
    try:
        return tuple(float(v) for v in val)
    except (TypeError, ValueError):
        raise UsageError(f"config {key!r} must contain numbers") from None


def load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return cfg


def build_run(cfg: dict, args) -> dict:
    """Validate a RunConfig dictionary into suite arguments."""
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise UsageError("seed must be a non-negative integer")
    orders = tuple(parse_order(k) for k in _float_list(cfg, "orders", SUITE_ORDERS))
    mats = cfg.get("matrices")
    if mats is None:
        matrices = tuple(SUITE_MATRICES)
    elif isinstance(mats, list) and mats:
        matrices = tuple(parse_matrix(m) for m in mats)
    else:
        raise UsageError("config 'matrices' must be a non-empty list")
    quad_cfg = cfg.get("quadrature", {})
    if not isinstance(quad_cfg, dict) or set(quad_cfg) - QUAD_KEYS:
        raise UsageError(f"config 'quadrature' accepts only {sorted(QUAD_KEYS)}")
    quad = quad_from(args, quad_cfg)
    base = SuiteConfig()
    cp = cfg.get("cowling_price", base.cowling_price)
    try:
        cp = tuple((int(m), float(d)) for m, d in cp)
    except (TypeError, ValueError):
        raise UsageError("config 'cowling_price' must be a list of [degree, delta]") from None
    suite = SuiteConfig(
        s_values=_float_list(cfg, "s_values", base.s_values),
        exponents=_float_list(cfg, "exponents", base.exponents),
        gaussian_t=_float_list(cfg, "gaussian_t", base.gaussian_t),
        miyachi_s=tuple(cfg.get("miyachi_s", base.miyachi_s)),
        cowling_price=cp,
        eta=float(cfg.get("eta", base.eta)),
        set_fraction=float(cfg.get("set_fraction", base.set_fraction)),
        quad=quad)
    for p in suite.exponents:
        if not 1.0 < p <= 2.0:
            raise UsageError(f"exponent p={p} outside (1, 2]")
    for s in suite.s_values + suite.gaussian_t:
        if not s > 0:
            raise UsageError("s_values and gaussian_t must be positive")
    if not 0.0 < suite.set_fraction < 1.0:
        raise UsageError("set_fraction must lie in (0, 1)")
    corpus = build_corpus(cfg, seed)
    return {"seed": seed, "orders": orders, "matrices": matrices, "suite": suite,
            "corpus": corpus}


def build_corpus(cfg: dict, seed: int) -> list:
    if "signals" in cfg:
        sigs = cfg["signals"]
        if not isinstance(sigs, list):
            raise UsageError("config 'signals' must be a list of {family, params}")
        out = []
        for i, item in enumerate(sigs):
            if not isinstance(item, dict) or item.get("family") not in FAMILIES:
                raise UsageError(f"config signal #{i} needs a known 'family'")
            params = item.get("params", {})
            s = seed + i if item["family"] == "random_trig_bump" else None
            try:
                sig = make_signal(item["family"], params, s)
            except (TypeError, ValueError, LcdunklError) as exc:
                raise UsageError(f"config signal #{i}: {exc}") from None
            out.append(CorpusEntry(sig, item["family"], dict(params), s))
        return out
    corpus = corpus_default(seed)
    fams = cfg.get("families")
    if fams is not None:
        if not isinstance(fams, list) or set(fams) - set(FAMILIES):
            raise UsageError(f"config 'families' must list names from {FAMILIES}")
        corpus = [e for e in corpus if e.family in fams]
    return corpus


def config_echo(run: dict) -> dict:
    s = run["suite"]
    q = s.quad
    return {"seed": run["seed"], "orders": list(run["orders"]),
            "matrices": [list(M.as_tuple()) for M in run["matrices"]],
            "exponents": list(s.exponents), "s_values": list(s.s_values),
            "gaussian_t": list(s.gaussian_t), "miyachi_s": list(s.miyachi_s),
            "cowling_price": [list(c) for c in s.cowling_price], "eta": s.eta,
            "set_fraction": s.set_fraction,
            "quadrature": {"rel_tol": q.rel_tol, "panels": q.panels,
                           "nodes_per_panel": q.nodes_per_panel, "radius": q.radius}}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_kernel(args) -> int:
    k = parse_order(args.k)
    M = matrix_from_args(args)
    if M.b == 0:
        raise UsageError("the kernel needs b != 0")
    lam = parse_range(args.lambda_range)
    vals = lcdt_kernel(M, k, lam, float(args.x)) if lam.size else np.zeros(0, complex)
    write_csv(zip(lam, np.real(vals), np.imag(vals)), ("lambda", "re", "im"), None)
    return EXIT_OK


def cmd_transform(args) -> int:
    k = parse_order(args.k)
    M = matrix_from_args(args)
    if (args.signal is None) == (args.input is None):
        raise UsageError("give exactly one of --signal or --input")
    if args.signal is not None:
        f = parse_signal(args.signal, args.seed)
    else:
        f = sampled_signal(*read_samples(args.input), label=os.path.basename(args.input))
    quad = quad_from(args)
    grid = parse_range(args.grid) if args.grid else default_grid(f, M, k)
    if grid.size == 0:
        write_csv([], ("lambda", "re", "im"), args.out)
        return EXIT_OK
    spec = lcdt_forward(f, M, k, grid, quad)
    write_csv(zip(spec.grid, spec.values.real, spec.values.imag), ("lambda", "re", "im"),
              args.out)
    return EXIT_OK


def versions() -> dict:
    return {"lcdunkl": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def report_document(run: dict, report, timestamp: Optional[str]) -> dict:
    doc = {"meta": {"seed": run["seed"], "versions": versions(),
                    "config": config_echo(run),
                    "corpus": json.loads(corpus_manifest(run["corpus"])),
                    "timestamp": timestamp},
           "cases": [r.to_dict() for r in report.cases],
           "errors": list(report.errors),
           "summary": report.summary}
    doc = json_safe(doc)
    doc["meta"]["content_sha256"] = content_hash(doc)
    return doc


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    run = build_run(cfg, args)
    out = args.out or cfg.get("output") or "lcdunkl-report.json"
    progress = None
    if args.progress:
        def progress(label):
            print(label, file=sys.stderr, flush=True)
    report = run_suite(run["corpus"], run["matrices"], run["orders"], run["suite"],
                       progress=progress)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    atomic_write(out, dumps(report_document(run, report, stamp)))
    if args.manifest:
        atomic_write(args.manifest, corpus_manifest(run["corpus"]) + "\n")
    bad = report.violated()
    print(f"{len(report.cases)} reports, {bad} violated, {len(report.errors)} errors -> {out}")
    return EXIT_VIOLATED if bad else EXIT_OK


def render_table(cases: list) -> str:
    rows = {}
    for c in cases:
        if not isinstance(c, dict) or "theorem_id" not in c or "verdict" not in c:
            raise UsageError("each case needs theorem_id and verdict")
        r = rows.setdefault(c["theorem_id"], {"cases": 0, "worst": 0.0, "verdicts": set()})
        r["cases"] += 1
        r["verdicts"].add(c["verdict"])
        ratio = c.get("ratio")
        if c["verdict"] != "trivial" and isinstance(ratio, (int, float)):
            r["worst"] = max(r["worst"], float(ratio))
    lines = [f"{'theorem_id':<28} {'cases':>6} {'worst ratio':>12}  verdict"]
    order = ("violated", "holds", "empirical_only", "trivial")
    for tid in sorted(rows):
        r = rows[tid]
        verdict = next((v for v in order if v in r["verdicts"]), sorted(r["verdicts"])[0])
        lines.append(f"{tid:<28} {r['cases']:>6} {r['worst']:>12.4e}  {verdict}")
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.input} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("cases"), list):
        raise UsageError(f"{args.input} has no 'cases' array")
    sys.stdout.write(render_table(doc["cases"]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _add_matrix_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--matrix", help="a,b,c,d with ad - bc = 1")
    g.add_argument("--theta", type=float, help="fractional angle: (cos, -sin; sin, cos)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--quad-tol", type=float, default=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="lcdunkl", parents=[common],
                                 description="Linear canonical Dunkl transform toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", parents=[common], help="sample the transform kernel")
    p.add_argument("--k", required=True)
    _add_matrix_flags(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--lambda-range", default="-10:10:201", help="LO:HI:N")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("transform", parents=[common], help="transform a signal to CSV")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--signal", help="FAMILY:key=val,... e.g. gaussian:s=1")
    src.add_argument("--input", help="CSV of x,re,im samples")
    p.add_argument("--k", required=True)
    _add_matrix_flags(p)
    p.add_argument("--grid", help="LO:HI:N (default: 513 points over the spectrum window)")
    p.add_argument("--out", help="output CSV (default: standard output)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="run the inequality suite")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--manifest", help="also write the corpus manifest here")
    p.add_argument("--progress", action="store_true", help="print case labels to stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="summarize a JSON report")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.seed = getattr(args, "seed", None)
    args.quad_tol = getattr(args, "quad_tol", None)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"error: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except LcdunklError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
