"""Command-line interface: ``quadcorr correlate | verify | fit-exponent | sieve``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, QuadcorrError
from .forms import QuadForm
from .predict import KINDS, predict
from .quadcount import empirical_D, empirical_nonsplit, empirical_rr
from .repnum import SieveCache, class_number_table

__all__ = ["ExperimentSpec", "COLUMNS", "main", "run_correlate", "fit_exponent", "read_report", "load_config"]

COLUMNS = ("kind", "X", "shift", "empirical", "predicted", "ratio", "sigma_inf", "sigma_finite", "seconds")
DEFAULT_PMAX = {"split": 200, "nonsplit": 200, "r2": 1000, "rq": 100}
SUM2 = QuadForm.sum_of_squares(2)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    X: tuple[int, ...]
    shifts: tuple[int, ...]
    pmax: int
    forms: tuple[str, str] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {', '.join(KINDS)}")
        if not self.X or not self.shifts:
            raise DomainError("X and shift grids must be nonempty")
        if list(self.X) != sorted(set(self.X)) or list(self.shifts) != sorted(set(self.shifts)):
            raise DomainError("grids must be strictly ascending")
        if min(self.X) < 1 or min(self.shifts) < 0:
            raise DomainError("need X >= 1 and shifts >= 0")
        if self.pmax < 3:
            raise DomainError("pmax must be at least 3")
        if self.kind == "r2" and min(self.shifts) < 1:
            raise DomainError("two-squares shifts must be positive")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def quad_forms(self) -> tuple[QuadForm, QuadForm]:
        if self.forms is None:
            return SUM2, SUM2
        return QuadForm.parse(self.forms[0]), QuadForm.parse(self.forms[1])


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return "%.17g" % x


class _Empirical:
    """Left-hand sides for one experiment, sharing tables across grid points."""

    def __init__(self, spec: ExperimentSpec, cache: SieveCache):
        self.spec = spec
        self.cache = cache
        self._h = None
        if spec.kind == "split":
            self._h = class_number_table(max(spec.X) + max(spec.shifts))

    def __call__(self, X: int, shift: int) -> int:
        kind = self.spec.kind
        if kind == "split":
            return empirical_D(X, shift, self._h)
        if kind == "nonsplit":
            return empirical_nonsplit(X, shift)
        Q1, Q2 = self.spec.quad_forms() if kind == "rq" else (SUM2, SUM2)
        return empirical_rr(Q1, Q2, X, shift, self.cache)


def _row(spec: ExperimentSpec, emp: _Empirical, X: int, shift: int, timing: bool) -> list[str]:
    t0 = time.perf_counter()
    empirical = emp(X, shift)
    pred = predict(spec.kind, X, shift, spec.pmax, forms=spec.quad_forms() if spec.kind == "rq" else None)
    seconds = time.perf_counter() - t0 if timing else 0.0
    ratio = empirical / pred.main if pred.main != 0 else math.nan
    if pred.main == 0:
        print(f"warning: zero main term at X={X}, shift={shift}; ratio undefined", file=sys.stderr)
    return [spec.kind, _fmt(X), _fmt(shift), _fmt(empirical), _fmt(pred.main), _fmt(ratio),
            _fmt(pred.archimedean), _fmt(pred.sigma_finite), _fmt(seconds)]


def run_correlate(spec: ExperimentSpec, out, *, cache_dir=None, threads: int = 1, timing: bool = True) -> int:
    """Write the report for ``spec`` to the text stream ``out``; returns the row count.

    Rows are computed on a pool of ``threads`` workers and written in grid
    order, each flushed as soon as it and all earlier rows are done.
    """
    cache = SieveCache(cache_dir)
    emp = _Empirical(spec, cache)
    out.write(f"# quadcorr correlate spec-sha256={spec.digest()}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    out.flush()
    grid = [(X, s) for s in spec.shifts for X in spec.X]
    count = 0
    with ThreadPoolExecutor(max(1, threads)) as pool:
        for row in pool.map(lambda g: _row(spec, emp, g[0], g[1], timing), grid):
            writer.writerow(row)
            out.flush()
            count += 1
    return count


def read_report(path) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def fit_exponent(X, empirical, predicted) -> tuple[float, float]:
    """Least-squares slope of log|empirical - predicted| against log X, and the RMS residual."""
    X = np.asarray(X, dtype=float)
    diff = np.abs(np.asarray(empirical, dtype=float) - np.asarray(predicted, dtype=float))
    keep = (diff > 0) & np.isfinite(diff) & (X > 0)
    if keep.sum() < 4 or np.unique(X[keep]).size < 4:
        raise DomainError("need at least four distinct X with nonzero difference")
    lx, ly = np.log(X[keep]), np.log(diff[keep])
    slope, icpt = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + icpt)) ** 2)))
    return float(slope), resid


def load_config(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment.  Keys use flag names."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line without '=': {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _int_list(text: str) -> tuple[int, ...]:
    vals = []
    for part in str(text).split(","):
        part = part.strip()
        if part:
            vals.append(int(float(part)) if "e" in part.lower() else int(part))
    return tuple(vals)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadcorr", description="Correlations of class numbers and representation numbers.")
    sub = parser.add_subparsers(dest="command", required=True)

    cor = sub.add_parser("correlate", help="empirical sums against predicted main terms")
    cor.add_argument("--config", help="key = value file mirroring these flags")
    cor.add_argument("--kind", choices=KINDS)
    cor.add_argument("--X", dest="X", help="comma-separated X grid")
    cor.add_argument("--l", dest="l", help="comma-separated shifts (l, or d for nonsplit)")
    cor.add_argument("--pmax", type=int, help="Euler product cutoff")
    cor.add_argument("--forms", help="Q1;Q2 for kind rq, e.g. 'diag:1,1,2;diag:1,1,1'")
    cor.add_argument("--out", help="output CSV (default stdout)")
    cor.add_argument("--cache", help="sieve cache directory (default $QUADCORR_CACHE)")
    cor.add_argument("--threads", type=int, help="worker threads")
    cor.add_argument("--no-timing", dest="no_timing", action="store_true", default=None,
                     help="write 0 in the seconds column so reruns are byte-identical")

    ver = sub.add_parser("verify", help="run the self-check suites")
    ver.add_argument("--filter", help="only run checks whose name contains this")
    ver.add_argument("--out", help="write the JSON summary here as well")

    fit = sub.add_parser("fit-exponent", help="slope of log|empirical - predicted| in log X")
    fit.add_argument("--in", dest="inp", required=True, help="report CSV from correlate")

    sv = sub.add_parser("sieve", help="fill the representation-number cache")
    sv.add_argument("--form", default="diag:1,1,1")
    sv.add_argument("--N", type=int, required=True)
    sv.add_argument("--cache", help="cache directory (default $QUADCORR_CACHE)")
    return parser


def _merge_config(args) -> dict:
    cfg = load_config(args.config) if args.config else {}
    merged = dict(cfg)
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config"):
            merged[key] = value
    return merged


def _cmd_correlate(args) -> int:
    opts = _merge_config(args)
    if "kind" not in opts or "X" not in opts or "l" not in opts:
        raise DomainError("correlate needs --kind, --X and --l (flags or config)")
    kind = opts["kind"]
    forms = None
    if opts.get("forms"):
        parts = str(opts["forms"]).split(";")
        if len(parts) != 2:
            raise DomainError("--forms takes two forms separated by ';'")
        forms = (parts[0].strip(), parts[1].strip())
    spec = ExperimentSpec(kind, _int_list(opts["X"]), _int_list(opts["l"]),
                          int(opts.get("pmax", DEFAULT_PMAX[kind])), forms)
    timing = not (str(opts.get("no_timing", False)).lower() in ("1", "true", "yes"))
    threads = int(opts.get("threads", 1))
    cache = opts.get("cache") or os.environ.get("QUADCORR_CACHE")
    if opts.get("out"):
        with open(opts["out"], "w", newline="") as fh:
            run_correlate(spec, fh, cache_dir=cache, threads=threads, timing=timing)
    else:
        run_correlate(spec, sys.stdout, cache_dir=cache, threads=threads, timing=timing)
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_checks

    results = run_checks(args.filter)
    summary = {
        "passed": all(r.passed for r in results) and bool(results),
        "checks": [r.to_dict() for r in results],
    }
    text = json.dumps(summary, indent=2, sort_keys=True, default=str)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return 0 if summary["passed"] else 1


def _cmd_fit(args) -> int:
    rows = read_report(args.inp)
    groups: dict[tuple[str, str], list[dict]] = {}
    for r in rows:
        groups.setdefault((r["kind"], r["shift"]), []).append(r)
    out = []
    for (kind, shift), rs in groups.items():
        X = [float(r["X"]) for r in rs]
        try:
            slope, resid = fit_exponent(X, [float(r["empirical"]) for r in rs], [float(r["predicted"]) for r in rs])
            out.append({"kind": kind, "shift": int(shift), "points": len(rs), "slope": slope, "residual": resid})
        except DomainError as exc:
            out.append({"kind": kind, "shift": int(shift), "points": len(rs), "error": str(exc)})
    print(json.dumps(out, indent=2))
    return 1 if any("error" in o for o in out) else 0


def _cmd_sieve(args) -> int:
    cache = SieveCache(args.cache)
    if cache.directory is None:
        raise DomainError("sieve needs --cache or QUADCORR_CACHE")
    table = cache.get(QuadForm.parse(args.form), args.N)
    print(f"{table.form} up to {table.bound}: cached in {cache.directory}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"correlate": _cmd_correlate, "verify": _cmd_verify, "fit-exponent": _cmd_fit, "sieve": _cmd_sieve}
    try:
        return handlers[args.command](args)
    except (QuadcorrError, OSError) as exc:
        print(f"quadcorr: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
