"""Semiclassical quantization conditions: SWKB, BSWKB, WKB and Langer-WKB.

Forward checks take the closed-form level ``E_n`` and compare the action
integral against its target. Inverse solves recover ``E`` from the condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import optimize

from . import catalog
from .catalog import BROKEN_CAPABLE, Phase
from .errors import (
    BracketFailure,
    DegenerateInterval,
    NotApplicable,
    NoTurningPoints,
    ParamError,
    PhaseError,
    RangeError,
)
from .quadrature import (
    ActionIntegral,
    TurningPair,
    action_integral,
    find_turning_points,
    refine_root,
    scan_mesh,
    sign_changes,
)

DEFAULT_TOL = 1e-8
QUAD_TOL = 1e-10


class Condition(str, Enum):
    WKB = "WKB"
    LANGER_WKB = "LangerWKB"
    SWKB = "SWKB"
    BSWKB = "BSWKB"


@dataclass(frozen=True)
class QuantizationResult:
    condition: Condition
    n: int
    integral: float
    target: float
    abs_err: float
    rel_err: float
    passed: bool
    maslov_nu: Fraction
    energy: float = math.nan
    nodes: int = 0
    turning_points: tuple[float, float] = (math.nan, math.nan)

    @property
    def pass_(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class LangerCorrection:
    """``delta_V(x) = (hbar**2 / 4) f1'(x)``."""

    spec: catalog.SuperpotentialSpec
    params: dict
    hbar: float = 1.0

    def delta_V(self, x):
        return self.spec.langer_shift(x, self.params, self.hbar)


@dataclass(frozen=True)
class LangerIdentityResult:
    n: int
    lhs: float
    rhs: float
    abs_err: float
    passed: bool


def _result(cond: Condition, n: int, ai: ActionIntegral, target: float, tol: float, E: float, pair: TurningPair) -> QuantizationResult:
    abs_err = abs(ai.value - target)
    rel_err = abs_err / abs(target) if target else math.inf
    nu = Fraction(0) if cond is Condition.SWKB else Fraction(1, 2)
    return QuantizationResult(
        condition=cond,
        n=n,
        integral=ai.value,
        target=target,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=abs_err <= tol * max(1.0, abs(target)),
        maslov_nu=nu,
        energy=E,
        nodes=ai.node_count_used,
        turning_points=(pair.x_L, pair.x_R),
    )


def _require_phase(spec, p: dict, hbar: float, want: Phase) -> None:
    rep = catalog.classify_phase(spec, p, hbar)
    if rep.phase is not want:
        raise PhaseError(f"{spec.name}: phase is {rep.phase.value}, {want.value} required ({rep.evidence})")


def _w2(spec, p: dict, hbar: float) -> Callable:
    def F(x):
        w = spec.W(x, p, hbar)
        return w * w

    return F


def swkb_integral(spec, params, hbar: float, E: float, tol: float = QUAD_TOL) -> tuple[ActionIntegral, TurningPair]:
    """``int sqrt(E - W**2)`` between the zeros of the radicand."""
    p = spec.validate(params)
    F = _w2(spec, p, hbar)
    pair = find_turning_points(F, spec.domain, E)
    return action_integral(lambda x: E - F(x), pair, tol), pair


def swkb_check(spec, params, hbar: float = 1.0, n: int = 1, tol: float = DEFAULT_TOL, quad_tol: float = QUAD_TOL) -> QuantizationResult:
    """SWKB condition ``int sqrt(E_n - W**2) = n pi hbar`` (unbroken phase)."""
    p = spec.validate(params)
    _require_phase(spec, p, hbar, Phase.UNBROKEN)
    if n == 0:
        raise DegenerateInterval("n = 0: E_0 = 0 makes both turning points coincide")
    E = catalog.analytic_energy(spec, n, p, hbar, Phase.UNBROKEN)
    ai, pair = swkb_integral(spec, p, hbar, E, quad_tol)
    return _result(Condition.SWKB, n, ai, n * math.pi * hbar, tol, E, pair)


def _has_interior_extremum(spec, p: dict, hbar: float) -> bool:
    xs = scan_mesh(spec.domain)
    with np.errstate(all="ignore"):
        d = np.asarray(spec.dW(xs, p, hbar), dtype=float)
    d = d[np.isfinite(d)]
    return bool(np.any(d > 0) and np.any(d < 0))


def bswkb_check(spec, params, hbar: float = 1.0, n: int = 0, tol: float = DEFAULT_TOL, quad_tol: float = QUAD_TOL) -> QuantizationResult:
    """Broken-phase condition ``int sqrt(E_n - W**2) = (n + 1/2) pi hbar``.

    Only classes whose W has an interior extremum carry two turning points;
    every other broken case raises :class:`NoTurningPoints`.
    """
    p = spec.validate(params)
    _require_phase(spec, p, hbar, Phase.BROKEN)
    if spec.si_class not in BROKEN_CAPABLE or not _has_interior_extremum(spec, p, hbar):
        raise NoTurningPoints(f"{spec.name}: W is monotonic in the broken phase, W**2 - E has at most one root", count=1)
    E = catalog.analytic_energy(spec, n, p, hbar, Phase.BROKEN)
    ai, pair = swkb_integral(spec, p, hbar, E, quad_tol)
    return _result(Condition.BSWKB, n, ai, (n + 0.5) * math.pi * hbar, tol, E, pair)


def wkb_potential(spec, params, hbar: float = 1.0, langer: bool = False) -> Callable:
    """``V_minus`` (plus the Langer shift when ``langer``) as a vectorised callable."""
    p = spec.validate(params)
    if langer and getattr(spec, "extended", False):
        raise NotApplicable("the Langer shift is defined for conventional entries only")

    def V(x):
        w = spec.W(x, p, hbar)
        v = w * w - hbar * spec.dW(x, p, hbar)
        if langer:
            v = v + spec.langer_shift(x, p, hbar)
        return v

    return V


def _classical_pair(V: Callable, domain: tuple[float, float], E: float) -> TurningPair:
    """Turning points of ``E - V``, allowing a singular edge where V -> -inf."""
    try:
        return find_turning_points(V, domain, E)
    except NoTurningPoints as exc:
        if exc.count != 1:
            raise
    xs, res, idx = sign_changes(V, domain, E)
    i = int(idx[0])
    lo, hi = domain
    x, w, r = refine_root(V, xs[i], xs[i + 1], E)
    # the radicand stays positive from the root out to a finite edge
    if res[0] > 0 and math.isfinite(lo):
        return TurningPair(lo, x, w, (math.nan, E - r), edges=(True, False))
    if res[-1] > 0 and math.isfinite(hi):
        return TurningPair(x, hi, w, (E - r, math.nan), edges=(False, True))
    raise NoTurningPoints("a single turning point and no integrable edge", count=1)


def wkb_integral(spec, params, hbar: float, E: float, langer: bool = False, tol: float = QUAD_TOL) -> tuple[ActionIntegral, TurningPair]:
    V = wkb_potential(spec, params, hbar, langer)
    pair = _classical_pair(V, spec.domain, E)
    return action_integral(lambda x: E - V(x), pair, tol), pair


def wkb_check(
    spec,
    params,
    hbar: float = 1.0,
    n: int = 0,
    tol: float = DEFAULT_TOL,
    langer: bool = False,
    quad_tol: float = QUAD_TOL,
) -> QuantizationResult:
    """WKB condition on ``V_minus`` (optionally Langer-shifted), target ``(n + 1/2) pi hbar``."""
    p = spec.validate(params)
    _require_phase(spec, p, hbar, Phase.UNBROKEN)
    E = catalog.analytic_energy(spec, n, p, hbar, Phase.UNBROKEN)
    ai, pair = wkb_integral(spec, p, hbar, E, langer, quad_tol)
    cond = Condition.LANGER_WKB if langer else Condition.WKB
    return _result(cond, n, ai, (n + 0.5) * math.pi * hbar, tol, E, pair)


def langer_identity_check(spec, params, hbar: float = 1.0, n: int = 0, tol: float = 1e-9, quad_tol: float = 1e-11) -> LangerIdentityResult:
    """Compare the Langer-WKB integral at ``a`` with an SWKB integral at ``a - hbar/2``.

    Right-hand side: ``int sqrt(E_{n+1/2}(a~) - W(x, a~)**2)`` with
    ``a~ = a - hbar/2`` and ``E_{n+1/2}(a~) = g(a~ + (n + 1/2) hbar) - g(a~)``.
    Both sides are computed by quadrature; ``passed`` means ``|lhs - rhs| <= tol``.
    """
    if getattr(spec, "extended", False):
        raise NotApplicable("the Langer identity is stated for conventional entries")
    p = spec.validate(params)
    _require_phase(spec, p, hbar, Phase.UNBROKEN)
    a = spec.a_of(p)
    at = a - 0.5 * hbar
    try:
        pt = spec.validate(spec.with_a(p, at))
    except ParamError as exc:
        raise ParamError(f"{spec.name}: shifted parameter a - hbar/2 = {at} is invalid: {exc}") from None
    if spec.phase_rule(pt) is not Phase.UNBROKEN:
        raise ParamError(f"{spec.name}: shifted parameter a - hbar/2 = {at} leaves the unbroken region")
    E = catalog.analytic_energy(spec, n, p, hbar, Phase.UNBROKEN)
    lhs, _ = wkb_integral(spec, p, hbar, E, True, quad_tol)
    Et = spec.g(at + (n + 0.5) * hbar, pt) - spec.g(at, pt)
    rhs, _ = swkb_integral(spec, pt, hbar, Et, quad_tol)
    diff = abs(lhs.value - rhs.value)
    return LangerIdentityResult(n, lhs.value, rhs.value, diff, diff <= tol)


def condition_integral(spec, params, hbar: float, E: float, condition: Condition, quad_tol: float = QUAD_TOL) -> float:
    """Action integral of ``condition`` at energy ``E``; zero when no region is allowed."""
    condition = Condition(condition)
    try:
        if condition in (Condition.SWKB, Condition.BSWKB):
            return swkb_integral(spec, params, hbar, E, quad_tol)[0].value
        return wkb_integral(spec, params, hbar, E, condition is Condition.LANGER_WKB, quad_tol)[0].value
    except (NoTurningPoints, DegenerateInterval) as exc:
        if isinstance(exc, NoTurningPoints) and exc.count != 0:
            raise
        return 0.0


def condition_target(condition: Condition, n: int, hbar: float) -> float:
    condition = Condition(condition)
    nu = 0.0 if condition is Condition.SWKB else 0.5
    return (n + nu) * math.pi * hbar


def solve_semiclassical_energy(
    spec,
    params,
    hbar: float = 1.0,
    n: int = 1,
    condition: Condition | str = Condition.SWKB,
    tol: float = 1e-10,
    quad_tol: float = 1e-12,
) -> float:
    """Energy ``E*`` at which the condition's integral hits its target.

    The bracket starts at the neighbouring closed-form levels and is widened
    a few times if needed; the root is found with Brent's bracketed
    secant/inverse-quadratic method.

    Raises:
        BracketFailure: the target could not be bracketed, or the residual at
            the root exceeds ``tol``.
    """
    condition = Condition(condition)
    p = spec.validate(params)
    phase = Phase.BROKEN if condition is Condition.BSWKB else Phase.UNBROKEN
    _require_phase(spec, p, hbar, phase)
    if condition is Condition.SWKB and n == 0:
        raise DegenerateInterval("n = 0 is the zero mode: the SWKB interval is empty")
    target = condition_target(condition, n, hbar)
    En = catalog.analytic_energy(spec, n, p, hbar, phase)

    def level(k: int) -> float | None:
        try:
            return catalog.analytic_energy(spec, k, p, hbar, phase)
        except RangeError:
            return None

    below = level(n - 1) if n > 0 else None
    above = level(n + 1)
    gap = (above - En) if above is not None else (En - below if below is not None else max(1.0, abs(En)))
    lo = below if below is not None else En - gap
    hi = above if above is not None else En + 0.5 * gap

    def phi(E: float) -> float:
        return condition_integral(spec, p, hbar, E, condition, quad_tol) - target

    f_lo, f_hi = phi(lo), phi(hi)
    for _ in range(8):
        if f_lo < 0 < f_hi:
            break
        if f_lo >= 0:
            lo -= gap
            f_lo = phi(lo)
        if f_hi <= 0:
            step = 0.5 * (hi - En) if above is None else gap
            hi = hi + step
            try:
                f_hi = phi(hi)
            except Exception:
                hi -= step
                break
    if not f_lo < 0 < f_hi:
        raise BracketFailure(f"target {target} not bracketed on [{lo}, {hi}]")
    E_star = optimize.brentq(phi, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    if abs(phi(E_star)) > tol * max(1.0, target):
        raise BracketFailure(f"residual {phi(E_star):.3e} at the root exceeds tol")
    return float(E_star)
