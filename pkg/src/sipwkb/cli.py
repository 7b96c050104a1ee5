"""Command-line batch driver.

Commands::

    sipwkb list
    sipwkb check swkb,wkb --potential all --n 1..8
    sipwkb oracle --potential morse --params A=5
    sipwkb curves --potential 3d-oscillator --params ell=3 --what W --range 0.2..6
    sipwkb fixtures regenerate

Reports are JSON ``{config_echo, records, summary}`` or CSV. Records are
sorted by ``(potential, condition, n)`` before serialisation, so serial and
parallel runs give byte-identical output. ``runtime_ms`` is recorded only
with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import catalog, extended, oracle, quadrature, quantization, transforms
from .catalog import BROKEN_CAPABLE, Phase
from .errors import SipError

SUITES = (
    "swkb",
    "bswkb",
    "wkb",
    "langer-wkb",
    "langer-identity",
    "oracle",
    "shape-invariance",
    "extended",
    "projections",
    "appc",
)

RECORD_FIELDS = (
    "potential",
    "class",
    "phase",
    "params",
    "n",
    "condition",
    "integral",
    "target",
    "abs_err",
    "rel_err",
    "tol",
    "pass",
    "runtime_ms",
    "error",
    "provenance",
)

DEFAULT_TOL = {
    "swkb": 1e-8,
    "bswkb": 1e-8,
    "wkb": 1e-8,
    "langer-wkb": 1e-8,
    "langer-identity": 1e-9,
    "oracle": 1e-6,
    "shape-invariance": 1e-9,
    "extended": 1e-6,
    "projections": 0.1,
    "appc": 1e-10,
}

DEFAULT_N = {
    "swkb": (1, 8),
    "bswkb": (0, 8),
    "wkb": (0, 8),
    "langer-wkb": (0, 8),
    "langer-identity": (0, 5),
    "oracle": (0, 4),
    "shape-invariance": (0, 0),
    "extended": (1, 4),
    "projections": (1, 1),
    "appc": (0, 99),
}

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    """Invalid command-line configuration (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    checks: tuple[str, ...]
    potentials: tuple[str, ...] = ("all",)
    params: tuple[str, ...] = ()
    hbar: float = 1.0
    n_range: tuple[int, int] | None = None
    tol: float | None = None
    output: str = "json"
    out_path: str | None = None
    seed: int = 0
    samples: bool = False
    random: int = 0
    lambdas: tuple[float, ...] = (3.0,)
    workers: int = 1
    timing: bool = False

    def echo(self) -> dict:
        """Everything that determines the report (not the worker count or path)."""
        return {
            "checks": list(self.checks),
            "potentials": list(self.potentials),
            "params": list(self.params),
            "hbar": self.hbar,
            "n_range": None if self.n_range is None else list(self.n_range),
            "tol": self.tol,
            "format": self.output,
            "seed": self.seed,
            "samples": self.samples,
            "random": self.random,
            "lambda": list(self.lambdas),
            "timing": self.timing,
        }


@dataclass
class Task:
    suite: str
    item: str
    params: dict
    ns: tuple[int, ...]
    hbar: float
    tol: float
    timing: bool
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split("..")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v
    if len(parts) != 2:
        raise ConfigError(f"bad range {text!r}; expected a..b")
    return float(parts[0]), float(parts[1])


def parse_n(text: str) -> tuple[int, int]:
    try:
        a, b = parse_range(text)
    except ValueError:
        raise ConfigError(f"bad level range {text!r}") from None
    if a != int(a) or b != int(b) or a < 0 or b < a:
        raise ConfigError(f"level range must be non-negative integers a..b with a <= b, got {text!r}")
    return int(a), int(b)


def parse_params(items: Sequence[str]) -> tuple[dict[str, float], dict[str, dict[str, float]]]:
    """``k=v`` pairs for every selected item and ``name:k=v`` pairs for one."""
    common: dict[str, float] = {}
    scoped: dict[str, dict[str, float]] = {}
    for chunk in items:
        for pair in filter(None, (s.strip() for s in chunk.split(","))):
            if "=" not in pair:
                raise ConfigError(f"bad parameter {pair!r}; expected k=v")
            key, val = pair.split("=", 1)
            try:
                value = float(val)
            except ValueError:
                raise ConfigError(f"parameter {key!r} is not a number: {val!r}") from None
            if ":" in key:
                name, key = key.split(":", 1)
                scoped.setdefault(name, {})[key] = value
            else:
                common[key] = value
    return common, scoped


def _catalog_set(suite: str) -> list[str]:
    if suite == "bswkb":
        return [s.name for s in catalog.CONVENTIONAL.values() if s.si_class in BROKEN_CAPABLE]
    if suite in ("oracle", "shape-invariance"):
        return catalog.names()
    return catalog.names(include_extended=False)


def _items(suite: str, potentials: Sequence[str]) -> list[str]:
    if suite == "extended":
        return ["quesne-extended"]
    if suite == "projections":
        known = list(transforms.PROJECTIONS)
    elif suite == "appc":
        known = list(quadrature.CLOSED_FORMS)
    else:
        known = catalog.names()
    if list(potentials) == ["all"]:
        if suite in ("projections", "appc"):
            return known
        return _catalog_set(suite)
    bad = [p for p in potentials if p not in known]
    if bad:
        raise ConfigError(f"unknown name(s) for suite {suite}: {', '.join(bad)}; known: {', '.join(known)}")
    return list(potentials)


def _base_params(suite: str, item: str) -> dict:
    if suite == "projections":
        return dict(transforms.DEFAULT_TARGETS[item])
    spec = catalog.get(item)
    if suite == "bswkb" and spec.broken_defaults is not None:
        return dict(spec.broken_defaults)
    return dict(spec.defaults)


def _validate_params(suite: str, item: str, p: dict) -> dict:
    if suite == "projections":
        return transforms.get(item).validate(p)
    return catalog.get(item).validate(p)


def _jitter(suite: str, item: str, base: dict, rng: np.random.Generator) -> dict | None:
    want = catalog.get(item).phase_rule(catalog.get(item).validate(base)) if suite != "projections" else None
    for _ in range(50):
        trial = {k: v * (1.0 + 0.1 * rng.uniform(-1.0, 1.0)) if v != 0 else v for k, v in base.items()}
        try:
            p = _validate_params(suite, item, trial)
        except SipError:
            continue
        if want is None or catalog.get(item).phase_rule(p) is want:
            return p
    return None


def build_tasks(cfg: RunConfig) -> list[Task]:
    """Expand a configuration into independent tasks, validating everything first."""
    if not cfg.checks:
        raise ConfigError("no checks requested")
    bad = [c for c in cfg.checks if c not in SUITES]
    if bad:
        raise ConfigError(f"unknown check(s): {', '.join(bad)}; known: {', '.join(SUITES)}")
    if not (cfg.hbar > 0 and math.isfinite(cfg.hbar)):
        raise ConfigError("hbar must be positive")
    if cfg.tol is not None and not cfg.tol > 0:
        raise ConfigError("tol must be positive")
    common, scoped = parse_params(cfg.params)
    tasks: list[Task] = []
    for suite in cfg.checks:
        items = _items(suite, cfg.potentials)
        unknown_scope = set(scoped) - set(items)
        if unknown_scope:
            raise ConfigError(f"--params names {', '.join(sorted(unknown_scope))} not selected for {suite}")
        lo, hi = cfg.n_range if cfg.n_range is not None else DEFAULT_N[suite]
        ns = tuple(range(lo, hi + 1))
        tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[suite]
        if suite == "extended":
            for lam in cfg.lambdas:
                if not lam > 0.5:
                    raise ConfigError(f"--lambda must exceed 1/2, got {lam}")
                tasks.append(Task(suite, "quesne-extended", {"lambda": lam}, ns, cfg.hbar, tol, cfg.timing))
            continue
        if suite == "appc":
            for k, name in enumerate(items):
                tasks.append(Task(suite, name, {}, ns, cfg.hbar, tol, cfg.timing, {"seed": [cfg.seed, k]}))
            continue
        for idx, item in enumerate(items):
            base = _base_params(suite, item)
            over = {**common, **scoped.get(item, {})}
            points = []
            try:
                points.append(_validate_params(suite, item, {**base, **over}))
                if cfg.samples and suite != "projections" and not over:
                    spec = catalog.get(item)
                    extra = spec.samples if suite != "bswkb" else ()
                    points.extend(spec.validate(s) for s in extra if dict(s) != base)
            except SipError as exc:
                raise ConfigError(f"{suite}/{item}: {exc}") from None
            rng = np.random.default_rng([cfg.seed, SUITES.index(suite), idx])
            for _ in range(cfg.random):
                p = _jitter(suite, item, points[0], rng)
                if p is not None:
                    points.append(p)
            for p in points:
                tasks.append(Task(suite, item, p, ns, cfg.hbar, tol, cfg.timing))
    return tasks


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def _clean(v: Any) -> Any:
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, (np.floating, np.integer)):
        return _clean(v.item())
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _record(task: Task, n, condition, **kw) -> dict:
    rec = {f: None for f in RECORD_FIELDS}
    rec.update(potential=task.item, params=dict(task.params), n=n, condition=condition, tol=task.tol, provenance={})
    rec.update(kw)
    rec["pass"] = bool(rec["pass"])
    return _clean(rec)


def _labels(task: Task) -> dict:
    try:
        spec = catalog.get(task.item)
    except SipError:
        return {}
    out = {"class": spec.si_class.value}
    try:
        out["phase"] = catalog.classify_phase(spec, task.params, task.hbar).phase.value
    except SipError as exc:
        out["phase"] = f"undetermined: {exc}"
    return out


def _q_record(task: Task, r: quantization.QuantizationResult, quad_tol: float) -> dict:
    return _record(
        task,
        r.n,
        r.condition.value,
        integral=r.integral,
        target=r.target,
        abs_err=r.abs_err,
        rel_err=r.rel_err,
        **{"pass": r.passed},
        provenance={
            "energy": r.energy,
            "turning_points": list(r.turning_points),
            "quadrature_nodes": r.nodes,
            "quad_tol": quad_tol,
            "maslov_nu": str(r.maslov_nu),
        },
    )


def _quantization(task: Task) -> list[dict]:
    spec = catalog.get(task.item)
    q = quantization
    out = []
    for n in task.ns:
        cond = {"swkb": "SWKB", "bswkb": "BSWKB", "wkb": "WKB", "langer-wkb": "LangerWKB"}[task.suite]
        try:
            if task.suite == "swkb":
                r = q.swkb_check(spec, task.params, task.hbar, n, task.tol)
            elif task.suite == "bswkb":
                r = q.bswkb_check(spec, task.params, task.hbar, n, task.tol)
            else:
                r = q.wkb_check(spec, task.params, task.hbar, n, task.tol, langer=task.suite == "langer-wkb")
            out.append(_q_record(task, r, q.QUAD_TOL))
        except SipError as exc:
            out.append(_record(task, n, cond, error=f"{type(exc).__name__}: {exc}", **{"pass": False}))
    return out


def _langer_identity(task: Task) -> list[dict]:
    spec = catalog.get(task.item)
    out = []
    for n in task.ns:
        try:
            r = quantization.langer_identity_check(spec, task.params, task.hbar, n, task.tol)
            out.append(
                _record(
                    task, n, "LangerIdentity", integral=r.lhs, target=r.rhs, abs_err=r.abs_err,
                    rel_err=r.abs_err / abs(r.rhs) if r.rhs else None, **{"pass": r.passed},
                    provenance={"quad_tol": 1e-11, "shifted_a": spec.a_of(task.params) - 0.5 * task.hbar},
                )
            )
        except SipError as exc:
            out.append(_record(task, n, "LangerIdentity", error=f"{type(exc).__name__}: {exc}", **{"pass": False}))
    return out


def _oracle(task: Task) -> list[dict]:
    spec = catalog.get(task.item)
    count = max(task.ns) + 1
    try:
        cmp = oracle.compare_spectra(spec, task.params, task.hbar, count, task.tol)
    except SipError as exc:
        return [_record(task, n, "Oracle", error=f"{type(exc).__name__}: {exc}", **{"pass": False}) for n in task.ns]
    out = []
    for n in task.ns:
        ok = cmp.rel_err[n] <= task.tol
        prov = {"grid_points": cmp.grid_points, "level_tol": oracle.LEVEL_TOL, "richardson_tol": oracle.RICHARDSON_TOL}
        if cmp.kernel_numeric is not None:
            ok = ok and cmp.kernel_rel_err[n] <= task.tol
            prov.update(kernel_numeric=cmp.kernel_numeric[n], kernel_rel_err=cmp.kernel_rel_err[n], kernel_grid_points=cmp.kernel_grid_points)
        out.append(
            _record(
                task, n, "Oracle", integral=cmp.numeric[n], target=cmp.analytic[n],
                abs_err=abs(cmp.numeric[n] - cmp.analytic[n]), rel_err=cmp.rel_err[n], **{"pass": ok}, provenance=prov,
            )
        )
    return out


def _shape_invariance(task: Task) -> list[dict]:
    spec = catalog.get(task.item)
    try:
        res = catalog.shape_invariance_residual(spec, task.params, task.hbar)
        scale = catalog.shape_invariance_scale(spec, task.params, task.hbar)
    except SipError as exc:
        return [_record(task, None, "ShapeInvariance", error=f"{type(exc).__name__}: {exc}", **{"pass": False})]
    return [
        _record(
            task, None, "ShapeInvariance", integral=res, target=0.0, abs_err=res, rel_err=res / scale,
            **{"pass": res <= task.tol * scale}, provenance={"scale": scale, "grid_points": 401, "window": list(spec.window)},
        )
    ]


def _extended(task: Task) -> list[dict]:
    lam = task.params["lambda"]
    out = []
    for n in task.ns:
        try:
            r = extended.extended_swkb(lam, n, 1e-12)
            k = extended.extended_swkb(lam, n, 1e-12, kernel_only=True)
        except SipError as exc:
            out.append(_record(task, n, "ExtendedSWKB", error=f"{type(exc).__name__}: {exc}", **{"pass": False}))
            continue
        dev = abs(r.deviation)
        out.append(
            _record(
                task, n, "ExtendedSWKB", integral=r.integral_over_pi, target=float(n), abs_err=dev, rel_err=dev / n,
                **{"pass": dev <= task.tol * max(1.0, n)},
                provenance={
                    "deviation": r.deviation,
                    "kernel_deviation": k.deviation,
                    "turning_points": [r.z1, r.z2],
                    "quadrature_nodes": r.nodes,
                    "quad_tol": 1e-12,
                },
            )
        )
    return out


def _projection(task: Task) -> list[dict]:
    proj = transforms.get(task.item)
    grid = np.linspace(-2.0, 2.0, 201) if proj.target == "morse" else np.linspace(0.5, 5.0, 201)
    out = []
    for n in task.ns:
        try:
            seq = transforms.spectral_sequence(proj, task.params, n, hbar=task.hbar)
            pot = transforms.potential_sequence(proj, task.params, grid)
        except SipError as exc:
            out.append(_record(task, n, "ProjectionLimit", error=f"{type(exc).__name__}: {exc}", **{"pass": False}))
            continue
        exp = seq.expected_ratio
        worst = max((abs(r / exp - 1.0) if math.isfinite(r) else math.inf) for r in seq.ratios)
        out.append(
            _record(
                task, n, "ProjectionLimit", integral=seq.errors[-1], target=0.0, abs_err=seq.errors[-1], rel_err=worst,
                **{"pass": seq.monotone and worst <= task.tol},
                provenance={
                    "limit": proj.symbol,
                    "eps": list(seq.eps),
                    "spectral_errors": list(seq.errors),
                    "spectral_ratios": list(seq.ratios),
                    "expected_ratio": exp,
                    "potential_errors": list(pot.errors),
                    "potential_ratios": list(pot.ratios),
                    "rules": list(proj.rules),
                },
            )
        )
    return out


def _appc(task: Task) -> list[dict]:
    rng = np.random.default_rng(task.extra["seed"])
    pairs = quadrature.random_arguments(task.item, rng, len(task.ns))
    out = []
    for n, (y1, y2) in zip(task.ns, pairs):
        cf = quadrature.closed_form(task.item, y1, y2)
        num = quadrature.closed_form_quadrature(task.item, y1, y2)
        err = abs(cf - num.value)
        out.append(
            _record(
                task, n, "ClosedForm", params={"y1": y1, "y2": y2}, integral=num.value, target=cf, abs_err=err,
                rel_err=err / (1.0 + abs(cf)), **{"pass": err <= task.tol * (1.0 + abs(cf))},
                provenance={"quadrature_nodes": num.node_count_used, "quad_tol": 1e-12},
            )
        )
    return out


_RUNNERS = {
    "swkb": _quantization,
    "bswkb": _quantization,
    "wkb": _quantization,
    "langer-wkb": _quantization,
    "langer-identity": _langer_identity,
    "oracle": _oracle,
    "shape-invariance": _shape_invariance,
    "extended": _extended,
    "projections": _projection,
    "appc": _appc,
}


def run_task(task: Task) -> list[dict]:
    start = time.perf_counter()
    try:
        recs = _RUNNERS[task.suite](task)
    except Exception as exc:  # never abort the batch
        recs = [_record(task, None, task.suite, error=f"{type(exc).__name__}: {exc}", **{"pass": False})]
    labels = _labels(task) if task.suite not in ("projections", "appc") else {}
    elapsed = (time.perf_counter() - start) * 1e3 / max(1, len(recs))
    for r in recs:
        r.update(labels)
        r["runtime_ms"] = round(elapsed, 3) if task.timing else None
    return recs


def _sort_key(r: dict):
    return (r["potential"], r["condition"], -1 if r["n"] is None else r["n"], json.dumps(r["params"], sort_keys=True))


def run(cfg: RunConfig) -> dict:
    """Execute every task and assemble the sorted report."""
    tasks = build_tasks(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(run_task, tasks))
    else:
        batches = [run_task(t) for t in tasks]
    records = sorted((r for b in batches for r in b), key=_sort_key)
    passed = sum(r["pass"] for r in records)
    return {
        "config_echo": cfg.echo(),
        "records": records,
        "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed},
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(RECORD_FIELDS)
    for r in report["records"]:
        row = []
        for f in RECORD_FIELDS:
            v = r[f]
            if isinstance(v, (dict, list)):
                v = json.dumps(v, sort_keys=True)
            elif isinstance(v, float):
                v = repr(v)
            elif v is None:
                v = ""
            row.append(v)
        out.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

CURVES = ("W", "Vminus", "Vplus", "eta")


def emit_curves(potential: str | None, params: dict, hbar: float, what: str, grid, lam: float = 3.0, n: int = 1) -> str:
    """Two-column ``x,value`` table of ``W``, ``V_minus``, ``V_plus`` or ``eta``.

    Raises:
        DomainError: a grid point is outside the open domain (``z <= 0`` for eta).
    """
    x = np.asarray(grid, dtype=float)
    if what == "eta":
        y = extended.eta(x, lam, n)
    else:
        spec = catalog.get(potential)
        if what == "W":
            y = catalog.evaluate_W(spec, x, params, hbar)
        else:
            y = catalog.evaluate_partner(spec, x, params, hbar, "minus" if what == "Vminus" else "plus")
    y = np.atleast_1d(y)
    lines = [f"x,{what}"] + [f"{repr(float(a))},{repr(float(b))}" for a, b in zip(np.atleast_1d(x), y)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", default="all", help="comma-separated names, or 'all'")
    p.add_argument("--params", action="append", default=[], help="k=v[,k=v]; prefix with 'name:' to scope")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--n", dest="n_range", default=None, help="inclusive level range a..b")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--format", dest="output", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", action="store_true", help="also run each entry's stored sample points")
    p.add_argument("--random", type=int, default=0, help="extra jittered parameter points per entry")
    p.add_argument("--lambda", dest="lambdas", default="3", help="comma-separated lambda values (extended)")
    p.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte-identical reports)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sipwkb", description="Semiclassical exactness checks for shape-invariant superpotentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    lst = sub.add_parser("list", help="catalog entries, projections and suites")
    lst.add_argument("--format", dest="output", choices=("text", "json"), default="text")

    chk = sub.add_parser("check", help="run one or more check suites")
    chk.add_argument("suite", help=f"comma-separated subset of: {', '.join(SUITES)}")
    _add_common(chk)

    orc = sub.add_parser("oracle", help="numeric spectra against the closed forms")
    _add_common(orc)

    cur = sub.add_parser("curves", help="two-column curve data for plotting")
    cur.add_argument("--potential", default="3d-oscillator")
    cur.add_argument("--params", action="append", default=[])
    cur.add_argument("--hbar", type=float, default=1.0)
    cur.add_argument("--what", choices=CURVES, default="W")
    cur.add_argument("--range", dest="xrange", default=None, help="a..b (default: the entry's plotting window)")
    cur.add_argument("--points", type=int, default=200)
    cur.add_argument("--lambda", dest="lam", type=float, default=3.0)
    cur.add_argument("--n", type=int, default=1)
    cur.add_argument("--out", default=None)

    fix = sub.add_parser("fixtures", help="maintain recorded fixture tables")
    fix.add_argument("action", choices=("regenerate",))
    fix.add_argument("--out", default=None, help="path (default: the packaged table)")
    return parser


def _config(args: argparse.Namespace, checks: Sequence[str]) -> RunConfig:
    try:
        lambdas = tuple(float(v) for v in args.lambdas.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad --lambda {args.lambdas!r}") from None
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")
    if args.random < 0:
        raise ConfigError("--random must be non-negative")
    return RunConfig(
        checks=tuple(checks),
        potentials=tuple(p.strip() for p in args.potential.split(",") if p.strip()) or ("all",),
        params=tuple(args.params),
        hbar=args.hbar,
        n_range=None if args.n_range is None else parse_n(args.n_range),
        tol=args.tol,
        output=args.output,
        out_path=args.out,
        seed=args.seed,
        samples=args.samples,
        random=args.random,
        lambdas=lambdas,
        workers=args.workers,
        timing=args.timing,
    )


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _list(fmt: str) -> str:
    rows = []
    for name in catalog.names():
        s = catalog.get(name)
        rows.append(
            {
                "name": name,
                "class": s.si_class.value,
                "extended": bool(getattr(s, "extended", False)),
                "params": list(s.param_names),
                "defaults": dict(s.defaults),
                "broken_defaults": getattr(s, "broken_defaults", None),
                "domain": [str(v) for v in s.domain],
            }
        )
    data = {"potentials": rows, "projections": list(transforms.PROJECTIONS), "suites": list(SUITES), "closed_forms": list(quadrature.CLOSED_FORMS)}
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    lines = [f"{'name':22} {'class':6} {'defaults'}"]
    for r in rows:
        extra = f"  broken: {r['broken_defaults']}" if r["broken_defaults"] else ""
        lines.append(f"{r['name']:22} {r['class']:6} {r['defaults']}{extra}")
    lines.append("projections: " + ", ".join(data["projections"]))
    lines.append("suites: " + ", ".join(SUITES))
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            _write(_list(args.output), None)
            return EXIT_OK
        if args.command == "fixtures":
            path = Path(args.out) if args.out else extended.fixture_path()
            extended.write_fixture(path)
            print(f"wrote {path}", file=sys.stderr)
            return EXIT_OK
        if args.command == "curves":
            common, scoped = parse_params(args.params)
            if scoped:
                raise ConfigError("curves takes plain k=v parameters")
            params = {}
            if args.what != "eta":
                spec = catalog.get(args.potential)
                params = spec.validate({**spec.defaults, **common})
                lo, hi = parse_range(args.xrange) if args.xrange else spec.window
            else:
                lo, hi = parse_range(args.xrange) if args.xrange else (0.05, 8.0)
            if args.points < 2:
                raise ConfigError("--points must be at least 2")
            grid = np.linspace(lo, hi, args.points)
            _write(emit_curves(args.potential, params, args.hbar, args.what, grid, args.lam, args.n), args.out)
            return EXIT_OK
        checks = ["oracle"] if args.command == "oracle" else [c.strip() for c in args.suite.split(",") if c.strip()]
        cfg = _config(args, checks)
        report = run(cfg)
    except (ConfigError, SipError, ValueError) as exc:
        print(f"sipwkb: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = to_json(report) if cfg.output == "json" else to_csv(report)
    _write(text, cfg.out_path)
    s = report["summary"]
    print(f"{s['passed']}/{s['total']} passed", file=sys.stderr)
    return EXIT_OK if s["failed"] == 0 else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
