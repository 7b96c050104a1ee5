"""Projections from type-I superpotentials onto type-II ones.

Each projection rescales the parameters of a hypergeometric (type-I) entry
with a limit parameter, ``alpha -> 0`` or ``beta -> inf``, so that its
superpotential and spectrum approach those of a confluent (type-II) entry.
The limits are checked numerically at a sequence of finite limit
parameters; nothing is evaluated at the limit itself.

Source superpotentials carry the extra scale ``alpha`` and shift ``beta``
and are written out here rather than taken from the catalog, whose entries
fix ``alpha = 1`` and ``beta = 0``. Level differences are computed in
factored form, e.g. ``A^2 - (A - d)^2 = d (2A - d)``, so that the small
limit error is not lost to cancellation when ``A ~ 1/alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import catalog
from .errors import DomainError, ParamError, RangeError


class LimitKind(str, Enum):
    PARAM_TO_INFINITY = "ParamToInfinity"
    PARAM_TO_ZERO = "ParamToZero"


@dataclass(frozen=True)
class ProjectionSpec:
    """One projection: parameter map, source forms and the target entry.

    ``param_map(target_params, eps)`` returns the source parameters
    (including ``alpha`` and ``beta``). ``coord(x, sp)`` maps the target
    coordinate to the source coordinate. ``domain(sp)`` is the open interval,
    in the target coordinate, on which the mapped source superpotential is
    regular. ``rules`` lists the redefinitions in the order they are applied.
    """

    name: str
    source: str
    target: str
    limit_kind: LimitKind
    rules: tuple[str, ...]
    target_params: tuple[str, ...]
    param_map: Callable[[dict, float], dict]
    coord: Callable[[np.ndarray, dict], np.ndarray]
    w_source: Callable[[np.ndarray, dict], np.ndarray]
    level_source: Callable[[int, dict, float], float]
    max_level_source: Callable[[dict, float], int | None]
    source_ok: Callable[[dict], bool]
    domain: Callable[[dict], tuple[float, float]]
    w_target: Callable[[np.ndarray, dict], np.ndarray]
    target_catalog_params: Callable[[dict], dict]
    order: float

    @property
    def symbol(self) -> str:
        return "beta" if self.limit_kind is LimitKind.PARAM_TO_INFINITY else "alpha"

    def validate(self, target_params: dict) -> dict:
        p = dict(target_params)
        unknown = set(p) - set(self.target_params)
        missing = set(self.target_params) - set(p)
        if unknown or missing:
            raise ParamError(f"{self.name}: expected parameters {self.target_params}, got {sorted(p)}")
        catalog.get(self.target).validate(self.target_catalog_params(p))
        return {k: float(v) for k, v in p.items()}

    def check_eps(self, eps: float) -> float:
        eps = float(eps)
        if self.limit_kind is LimitKind.PARAM_TO_ZERO:
            if not (math.isfinite(eps) and eps > 0):
                raise RangeError(f"{self.name}: alpha must be finite and > 0, got {eps}")
        elif not (math.isfinite(eps) and eps > 0):
            raise RangeError(f"{self.name}: beta must be finite and > 0, got {eps}")
        return eps


def _coth_minus_csch(y, A, B):
    # A coth y - B csch y with cosh y - 1 = 2 sinh^2(y/2)
    s = np.sinh(0.5 * y)
    return (2.0 * A * s * s + (A - B)) / np.sinh(y)


def _morse_w(x, p):
    return p["A"] - p["B"] * np.exp(-x)


def _morse_level(n, p, h):
    return catalog.analytic_energy(catalog.MORSE, n, {"A": p["A"]}, h)


# P1a: Scarf (hyperbolic) -> Morse, beta -> inf


def _p1a_map(t, beta):
    return {"A": t["A"], "B": -t["B"] * math.exp(beta) / 2.0, "alpha": 1.0, "beta": beta}


def _p1a_w(x, sp):
    y = x + sp["beta"]
    return sp["A"] * np.tanh(y) + sp["B"] / np.cosh(y)


def _p1a_level(n, sp, h):
    d = n * h
    return d * (2.0 * sp["A"] - d)


# P2a: generalized Poschl-Teller -> Morse, alpha = 1 then beta -> inf


def _p2a_map(t, beta):
    return {"A": t["A"], "B": t["B"] * math.exp(beta) / 2.0, "alpha": 1.0, "beta": beta}


def _gpt_w(r, sp):
    return _coth_minus_csch(sp["alpha"] * r + sp["beta"], sp["A"], sp["B"])


def _gpt_level(n, sp, h):
    d = n * sp["alpha"] * h
    return d * (2.0 * sp["A"] - d)


def _gpt_top(sp, h):
    return catalog._last_below(sp["A"] / (sp["alpha"] * h))


# P2b: generalized Poschl-Teller -> 3-D oscillator, beta = 0 and alpha -> 0


def _p2b_map(t, alpha):
    w, l = t["omega"], t["ell"]
    return {"A": w / alpha - 0.5 * alpha * l, "B": w / alpha + 0.5 * alpha * l, "alpha": alpha, "beta": 0.0}


# P3b: Scarf (trigonometric) -> 3-D oscillator, x -> r + pi/(2 alpha), alpha -> 0


def _p3b_map(t, alpha):
    w, l = t["omega"], t["ell"]
    return {"A": w / alpha + 0.5 * alpha * l, "B": w / alpha - 0.5 * alpha * l, "alpha": alpha, "beta": 0.0}


def _p3b_w(r, sp):
    # A tan(alpha x) - B sec(alpha x) at alpha x = alpha r + pi/2, where
    # tan -> -cot(alpha r) and sec -> -csc(alpha r)
    y = sp["alpha"] * r
    s = np.sin(0.5 * y)
    return (2.0 * sp["A"] * s * s + (sp["B"] - sp["A"])) / np.sin(y)


def _p3b_level(n, sp, h):
    d = n * sp["alpha"] * h
    return d * (2.0 * sp["A"] + d)


# P4c: Rosen-Morse I -> Coulomb, alpha -> 0


def _p4c_map(t, alpha):
    return {"A": alpha * t["ell"], "B": -0.5 * alpha * t["e2"], "alpha": alpha, "beta": 0.0}


def _p4c_w(r, sp):
    return -sp["A"] / np.tan(sp["alpha"] * r) - sp["B"] / sp["A"]


def _ratio_levels(n, sp, h, sign):
    # sign * (A^2 - (A+d)^2) + B^2/A^2 - B^2/(A+d)^2, factored
    A, B = sp["A"], sp["B"]
    d = n * sp["alpha"] * h
    k = d * (2.0 * A + d)
    return -sign * k + B * B * k / (A * A * (A + d) ** 2)


def _p4c_level(n, sp, h):
    return _ratio_levels(n, sp, h, -1.0)


# P6c: Eckart -> Coulomb, alpha -> 0


def _p6c_map(t, alpha):
    return {"A": alpha * t["ell"], "B": 0.5 * alpha * t["e2"], "alpha": alpha, "beta": 0.0}


def _p6c_w(r, sp):
    y = sp["alpha"] * r
    return -sp["A"] * np.cosh(y) / np.sinh(y) + sp["B"] / sp["A"]


def _p6c_level(n, sp, h):
    return _ratio_levels(n, sp, h, 1.0)


def _p6c_top(sp, h):
    return catalog._last_below((math.sqrt(sp["B"]) - sp["A"]) / (sp["alpha"] * h))


def _osc_w(r, t):
    return 0.5 * t["omega"] * r - t["ell"] / r


def _coulomb_w(r, t):
    return t["e2"] / (2.0 * t["ell"]) - t["ell"] / r


_ident = lambda x, sp: x  # noqa: E731
_LINE = lambda sp: (-math.inf, math.inf)  # noqa: E731
_HALF = lambda sp: (0.0, math.inf)  # noqa: E731
_BOX = lambda sp: (0.0, math.pi / sp["alpha"])  # noqa: E731
_morse_cat = lambda t: {"A": t["A"]}  # noqa: E731
_same = lambda t: dict(t)  # noqa: E731
_none = lambda sp, h: None  # noqa: E731


PROJECTIONS: dict[str, ProjectionSpec] = {
    p.name: p
    for p in (
        ProjectionSpec(
            "P1a", "scarf-hyp", "morse", LimitKind.PARAM_TO_INFINITY,
            ("A -> A", "B -> -B e^beta / 2", "beta -> inf"),
            ("A", "B"), _p1a_map, _ident, _p1a_w, _p1a_level,
            lambda sp, h: catalog._last_below(sp["A"] / h),
            lambda sp: sp["A"] > 0,
            _LINE, _morse_w, _morse_cat, 2.0,
        ),
        ProjectionSpec(
            "P2a", "poschl-teller", "morse", LimitKind.PARAM_TO_INFINITY,
            ("A -> A", "B -> B e^beta / 2", "alpha -> 1", "beta -> inf", "r -> x"),
            ("A", "B"), _p2a_map, _ident, _gpt_w, _gpt_level, _gpt_top,
            lambda sp: 0 < sp["A"] < sp["B"],
            lambda sp: (-sp["beta"] / sp["alpha"], math.inf), _morse_w, _morse_cat, 2.0,
        ),
        ProjectionSpec(
            "P2b", "poschl-teller", "3d-oscillator", LimitKind.PARAM_TO_ZERO,
            ("A -> omega/alpha - alpha ell/2", "B -> omega/alpha + alpha ell/2", "beta -> 0", "alpha -> 0"),
            ("omega", "ell"), _p2b_map, _ident, _gpt_w, _gpt_level, _gpt_top,
            lambda sp: 0 < sp["A"] < sp["B"],
            _HALF, _osc_w, _same, 2.0,
        ),
        ProjectionSpec(
            "P3b", "scarf-trig", "3d-oscillator", LimitKind.PARAM_TO_ZERO,
            ("A -> omega/alpha + alpha ell/2", "B -> omega/alpha - alpha ell/2", "x -> r + pi/(2 alpha)", "alpha -> 0"),
            ("omega", "ell"), _p3b_map, _ident, _p3b_w, _p3b_level, _none,
            lambda sp: sp["A"] > sp["B"],
            _BOX, _osc_w, _same, 2.0,
        ),
        ProjectionSpec(
            "P4c", "rosen-morse-trig", "coulomb", LimitKind.PARAM_TO_ZERO,
            ("A -> alpha ell", "B -> -alpha e^2 / 2", "alpha -> 0", "x -> r"),
            ("e2", "ell"), _p4c_map, _ident, _p4c_w, _p4c_level, _none,
            lambda sp: sp["A"] > 0,
            _BOX, _coulomb_w, _same, 2.0,
        ),
        ProjectionSpec(
            "P6c", "eckart", "coulomb", LimitKind.PARAM_TO_ZERO,
            ("A -> alpha ell", "B -> alpha e^2 / 2", "alpha -> 0"),
            ("e2", "ell"), _p6c_map, _ident, _p6c_w, _p6c_level, _p6c_top,
            lambda sp: sp["A"] > 0 and sp["B"] > sp["A"] ** 2,
            _HALF, _coulomb_w, _same, 2.0,
        ),
    )
}

DEFAULT_TARGETS: dict[str, dict] = {
    "P1a": {"A": 5.0, "B": 1.0},
    "P2a": {"A": 5.0, "B": 1.0},
    "P2b": {"omega": 1.0, "ell": 3.0},
    "P3b": {"omega": 1.0, "ell": 3.0},
    "P4c": {"e2": 2.0, "ell": 1.0},
    "P6c": {"e2": 2.0, "ell": 1.0},
}

# four successive limit parameters per kind
DEFAULT_SCHEDULE: dict[LimitKind, tuple[float, ...]] = {
    LimitKind.PARAM_TO_ZERO: (1e-2, 5e-3, 2.5e-3, 1.25e-3),
    LimitKind.PARAM_TO_INFINITY: (4.0, 5.0, 6.0, 7.0),
}


def get(name: str) -> ProjectionSpec:
    try:
        return PROJECTIONS[name]
    except KeyError:
        raise ParamError(f"unknown projection {name!r}; known: {', '.join(PROJECTIONS)}") from None


def identity(name: str) -> ProjectionSpec:
    """A catalog entry projected onto itself (zero error at every eps)."""
    spec = catalog.get(name)
    top = lambda sp, h: catalog.max_level(spec, {k: sp[k] for k in spec.param_names}, h)  # noqa: E731
    return ProjectionSpec(
        f"identity:{name}", name, name, LimitKind.PARAM_TO_ZERO, ("x -> x",),
        spec.param_names,
        lambda t, eps: {**t, "alpha": 1.0, "beta": 0.0},
        _ident,
        lambda x, sp: spec.W(x, {k: sp[k] for k in spec.param_names}),
        lambda n, sp, h: catalog.analytic_energy(spec, n, {k: sp[k] for k in spec.param_names}, h),
        top,
        lambda sp: True,
        lambda sp: spec.domain,
        lambda x, t: spec.W(x, t),
        _same,
        math.nan,
    )


def map_params(proj: ProjectionSpec, target_params: dict, eps: float) -> dict:
    """Source parameters for ``target_params`` at limit parameter ``eps``.

    Raises:
        RangeError: ``eps`` is at or beyond the limit, or the mapped source
            parameters are not yet valid at this ``eps``.
    """
    t = proj.validate(target_params)
    sp = proj.param_map(t, proj.check_eps(eps))
    if not all(math.isfinite(v) for v in sp.values()):
        raise RangeError(f"{proj.name}: mapped parameters overflow at {proj.symbol}={eps}")
    if not proj.source_ok(sp):
        raise RangeError(f"{proj.name}: mapped {proj.source} parameters {sp} are invalid at {proj.symbol}={eps}")
    return sp


def target_energy(proj: ProjectionSpec, target_params: dict, n: int, hbar: float = 1.0) -> float:
    t = proj.validate(target_params)
    return catalog.analytic_energy(catalog.get(proj.target), n, proj.target_catalog_params(t), hbar)


def source_energy(proj: ProjectionSpec, target_params: dict, n: int, eps: float, hbar: float = 1.0) -> float:
    sp = map_params(proj, target_params, eps)
    if int(n) != n or n < 0:
        raise RangeError(f"level index must be a non-negative integer, got {n!r}")
    top = proj.max_level_source(sp, hbar)
    if top is not None and n > top:
        raise RangeError(f"{proj.name}: n={n} exceeds the source's last bound state n={top} at {proj.symbol}={eps}")
    return float(proj.level_source(int(n), sp, hbar))


def spectral_limit_error(proj: ProjectionSpec, target_params: dict, n: int, eps: float, hbar: float = 1.0) -> float:
    """``|E_n(source at eps) - E_n(target)|`` from the closed-form spectra.

    Raises:
        RangeError: invalid ``eps`` or ``n`` outside either spectrum.
    """
    return abs(source_energy(proj, target_params, n, eps, hbar) - target_energy(proj, target_params, n, hbar))


def potential_limit_error(proj: ProjectionSpec, target_params: dict, eps: float, grid) -> float:
    """``max |W_source(mapped x) - W_target(x)|`` over ``grid``.

    Raises:
        DomainError: some grid point lies outside the target domain or the
            region where the mapped source superpotential is regular.
    """
    sp = map_params(proj, target_params, eps)
    t = proj.validate(target_params)
    x = np.asarray(grid, dtype=float)
    lo_s, hi_s = proj.domain(sp)
    lo_t, hi_t = catalog.get(proj.target).domain
    lo, hi = max(lo_s, lo_t), min(hi_s, hi_t)
    if x.size == 0 or not (np.all(x > lo) and np.all(x < hi)):
        raise DomainError(f"{proj.name}: grid must lie inside ({lo:.6g}, {hi:.6g}) at {proj.symbol}={eps}")
    with np.errstate(all="ignore"):
        diff = np.abs(proj.w_source(proj.coord(x, sp), sp) - proj.w_target(x, t))
    if not np.all(np.isfinite(diff)):
        raise DomainError(f"{proj.name}: mapped source superpotential is not finite on the grid")
    return float(np.max(diff))


@dataclass(frozen=True)
class LimitSequence:
    """Errors along a schedule of limit parameters and their successive ratios."""

    projection: str
    kind: LimitKind
    eps: tuple[float, ...]
    errors: tuple[float, ...]
    ratios: tuple[float, ...]
    expected_ratio: float

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))


def expected_ratio(proj: ProjectionSpec, eps: Sequence[float]) -> float:
    """Error ratio per step predicted by the leading term.

    Algebraic limits shrink like ``alpha^2`` (ratio 4 per halving);
    exponential ones like ``e^{-beta}`` per unit ``beta``.
    """
    if proj.limit_kind is LimitKind.PARAM_TO_ZERO:
        return (eps[0] / eps[1]) ** proj.order
    return math.exp(eps[1] - eps[0])


def _ratios(errors: Sequence[float]) -> tuple[float, ...]:
    out = []
    for a, b in zip(errors, errors[1:]):
        out.append(a / b if b != 0 else (math.nan if a == 0 else math.inf))
    return tuple(out)


def spectral_sequence(proj: ProjectionSpec, target_params: dict, n: int, eps: Sequence[float] | None = None, hbar: float = 1.0) -> LimitSequence:
    eps = tuple(DEFAULT_SCHEDULE[proj.limit_kind] if eps is None else eps)
    errs = tuple(spectral_limit_error(proj, target_params, n, e, hbar) for e in eps)
    return LimitSequence(proj.name, proj.limit_kind, eps, errs, _ratios(errs), expected_ratio(proj, eps))


def potential_sequence(proj: ProjectionSpec, target_params: dict, grid, eps: Sequence[float] | None = None) -> LimitSequence:
    eps = tuple(DEFAULT_SCHEDULE[proj.limit_kind] if eps is None else eps)
    errs = tuple(potential_limit_error(proj, target_params, e, grid) for e in eps)
    return LimitSequence(proj.name, proj.limit_kind, eps, errs, _ratios(errs), expected_ratio(proj, eps))
