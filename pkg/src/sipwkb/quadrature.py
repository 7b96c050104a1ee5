"""Turning points and action integrals with square-root endpoints.

The action integral ``int sqrt(G(x)) dx`` between two simple zeros of ``G`` is
evaluated after the substitution ``x = m + h sin(theta)``, which turns the
endpoint square-root behaviour into a smooth ``cos(theta)`` factor. A composite
Gauss-Legendre rule over ``theta`` then converges spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateInterval,
    DomainError,
    MoreThanTwoRoots,
    NegativeIntegrand,
    NonConvergence,
    NoTurningPoints,
)

SCAN_POINTS = 2048
NODE_CAP = 2**20
GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass(frozen=True)
class TurningPair:
    """Two roots of ``E - F(x)`` bounding a classically allowed interval.

    ``edges`` flags an end that is a singular domain edge rather than a root
    (used for potentials that fall to minus infinity at the boundary).
    """

    x_L: float
    x_R: float
    bracket_width_at_convergence: float
    f_values_at_brackets: tuple[float, float]
    edges: tuple[bool, bool] = (False, False)


@dataclass(frozen=True)
class ActionIntegral:
    value: float
    estimated_error: float
    node_count_used: int


def scan_mesh(domain: tuple[float, float], count: int = SCAN_POINTS) -> np.ndarray:
    """Strictly interior mesh adapted to the shape of ``domain``.

    ``(-inf, inf)`` uses ``x = tan(theta)``; half lines use ``x = edge +/- e^t``;
    finite intervals are clustered towards both ends with a cosine map.
    """
    lo, hi = float(domain[0]), float(domain[1])
    u = (np.arange(count) + 0.5) / count
    if math.isinf(lo) and math.isinf(hi):
        return np.tan(math.pi * (u - 0.5))
    if math.isinf(hi):
        return lo + np.exp(-25.0 + 50.0 * u)
    if math.isinf(lo):
        return hi - np.exp(25.0 - 50.0 * u)
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(math.pi * u))


def _residual(F: Callable, E: float) -> Callable[[float], float]:
    def r(x: float) -> float:
        with np.errstate(all="ignore"):
            v = float(F(x))
        if math.isnan(v):
            return -math.inf
        return E - v

    return r


def _refine(r: Callable[[float], float], a: float, b: float, ra: float, rb: float, E: float) -> tuple[float, float, float]:
    """Root of ``r`` in [a, b] (sign change). Returns (root, width, residual)."""
    # bisection to 1e-8 relative width
    while abs(b - a) > 1e-8 * max(1.0, abs(a), abs(b)):
        m = 0.5 * (a + b)
        rm = r(m)
        if rm == 0.0:
            return m, 0.0, 0.0
        if (rm > 0) == (ra > 0):
            a, ra = m, rm
        else:
            b, rb = m, rm
    width = abs(b - a)
    # secant polish, kept inside the bracket
    for _ in range(3):
        if not (math.isfinite(ra) and math.isfinite(rb)) or ra == rb:
            break
        c = b - rb * (b - a) / (rb - ra)
        if not (min(a, b) < c < max(a, b)):
            break
        rc = r(c)
        if rc == 0.0:
            return c, width, 0.0
        if (rc > 0) == (ra > 0):
            a, ra = c, rc
        else:
            b, rb = c, rc
    target = 1e-12 * (1.0 + abs(E))
    # finish by bisection if the polish did not reach the residual target
    for _ in range(200):
        best = (a, ra) if abs(ra) <= abs(rb) else (b, rb)
        if abs(best[1]) <= target:
            break
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        rm = r(m)
        if (rm > 0) == (ra > 0):
            a, ra = m, rm
        else:
            b, rb = m, rm
    x, rx = (a, ra) if abs(ra) <= abs(rb) else (b, rb)
    return x, width, rx


def refine_root(F: Callable, a: float, b: float, E: float) -> tuple[float, float, float]:
    """Root of ``E - F`` in the sign-change bracket [a, b].

    Returns ``(x, bracket_width, E - F(x))``.
    """
    r = _residual(F, E)
    return _refine(r, a, b, r(a), r(b), E)


def sign_changes(F: Callable, domain: tuple[float, float], E: float, count: int = SCAN_POINTS):
    """Mesh and indices ``i`` where ``E - F`` changes sign between i and i+1."""
    xs = scan_mesh(domain, count)
    with np.errstate(all="ignore"):
        fv = np.asarray(F(xs), dtype=float)
    res = E - fv
    res = np.where(np.isnan(res), -np.inf, res)
    pos = res > 0
    idx = np.nonzero(pos[1:] != pos[:-1])[0]
    return xs, res, idx


def find_turning_points(F: Callable, domain: tuple[float, float], E: float, mesh: int = SCAN_POINTS) -> TurningPair:
    """Bracket and refine the two roots of ``E - F(x)`` on ``domain``.

    ``F`` must accept numpy arrays. ``E - F`` must be positive between the
    roots (a classically allowed well).

    Raises:
        NoTurningPoints: fewer than two sign changes (``count`` attribute).
        MoreThanTwoRoots: more than two sign changes.
    """
    E = float(E)
    xs, res, idx = sign_changes(F, domain, E, mesh)
    if len(idx) < 2:
        raise NoTurningPoints(f"E - F changes sign {len(idx)} time(s) on the scan mesh", count=len(idx))
    if len(idx) > 2:
        raise MoreThanTwoRoots(f"E - F changes sign {len(idx)} times on the scan mesh", count=len(idx))
    i, j = idx
    if res[i] > 0 or res[j + 1] > 0:
        raise NoTurningPoints("E - F is negative between the two sign changes", count=2)
    r = _residual(F, E)
    xl, wl, rl = _refine(r, xs[i], xs[i + 1], res[i], res[i + 1], E)
    xr, wr, rr = _refine(r, xs[j], xs[j + 1], res[j], res[j + 1], E)
    if not xl < xr:
        raise DegenerateInterval("turning points coincide")
    return TurningPair(xl, xr, max(wl, wr), (E - rl, E - rr))


def _gl_panels(g: Callable[[np.ndarray], np.ndarray], panels: int) -> float:
    edges = np.linspace(-0.5 * math.pi, 0.5 * math.pi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    theta = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    vals = g(theta)
    weights = (half[:, None] * _GL_W[None, :]).ravel()
    return float(np.dot(weights, vals))


def action_integral(G: Callable, pair: TurningPair, tol: float = 1e-10) -> ActionIntegral:
    """``int_{x_L}^{x_R} sqrt(G(x)) dx`` for a radicand vanishing at the ends.

    The panel count is doubled until two successive estimates agree to
    ``tol``. Rounding-level negative radicands (down to ``-10 tol``) are
    clipped to zero.

    Raises:
        NegativeIntegrand: ``G < -10 tol`` at some node.
        NonConvergence: the node cap was reached first.
    """
    a, b = float(pair.x_L), float(pair.x_R)
    if not b > a:
        raise DegenerateInterval("empty integration interval")
    m, h = 0.5 * (a + b), 0.5 * (b - a)

    def integrand(theta: np.ndarray) -> np.ndarray:
        x = m + h * np.sin(theta)
        with np.errstate(all="ignore"):
            gv = np.asarray(G(x), dtype=float) * np.ones_like(x)
        bad = gv < -10.0 * tol
        if np.any(bad):
            worst = int(np.argmin(gv))
            raise NegativeIntegrand(f"radicand {gv[worst]:.3e} at x={x[worst]:.12g}")
        if np.any(np.isnan(gv)):
            raise NegativeIntegrand("radicand is not finite inside the interval")
        return np.sqrt(np.maximum(gv, 0.0)) * h * np.cos(theta)

    panels = 1
    prev = _gl_panels(integrand, panels)
    while True:
        panels *= 2
        nodes = panels * GL_ORDER
        if nodes > NODE_CAP:
            raise NonConvergence(f"no convergence to {tol:g} within {NODE_CAP} nodes")
        cur = _gl_panels(integrand, panels)
        err = abs(cur - prev)
        if err <= tol:
            return ActionIntegral(cur, err, nodes)
        prev = cur


def action(F: Callable, domain: tuple[float, float], E: float, tol: float = 1e-10) -> tuple[ActionIntegral, TurningPair]:
    """Turning points of ``E - F`` followed by ``int sqrt(E - F)``."""
    pair = find_turning_points(F, domain, E)
    res = action_integral(lambda x: E - F(x), pair, tol)
    return res, pair


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _ordered(y1: float, y2: float, name: str) -> None:
    if not (math.isfinite(y1) and math.isfinite(y2) and y1 < y2):
        raise DomainError(f"{name} needs finite y1 < y2, got ({y1}, {y2})")


def _require(cond: bool, name: str, rule: str) -> None:
    if not cond:
        raise DomainError(f"{name} needs {rule}")


def _i0(y1, y2):
    return math.pi / 8.0 * (y2 - y1) ** 2


def _i1a(y1, y2):
    _require(0 < y1, "I1a", "0 < y1 < y2")
    return math.pi / 2.0 * (y1 + y2) - math.pi * math.sqrt(y1 * y2)


def _i1b(y1, y2):
    _require(y2 < 0, "I1b", "y1 < y2 < 0")
    return math.pi / 2.0 * (y1 + y2) + math.pi * math.sqrt(y1 * y2)


def _i2a(y1, y2):
    _require(y2 < 0, "I2a", "y1 < y2 < 0")
    r = math.sqrt(y1 * y2)
    return -math.pi * (y1 + y2 + 2.0 * r) / (2.0 * r)


def _i2b(y1, y2):
    _require(0 < y1, "I2b", "0 < y1 < y2")
    r = math.sqrt(y1 * y2)
    return math.pi * (y1 + y2 - 2.0 * r) / (2.0 * r)


def _i3(y1, y2):
    inner = math.sqrt(1.0 + y1 * y1) * math.sqrt(1.0 + y2 * y2) - y1 * y2 + 1.0
    return math.pi / math.sqrt(2.0) * math.sqrt(inner) - math.pi


def _i4(y1, y2):
    _require(-1 < y1 and y2 < 1, "I4", "-1 < y1 < y2 < 1")
    return math.pi / 2.0 * (2.0 - math.sqrt((1 - y1) * (1 - y2)) - math.sqrt((1 + y1) * (1 + y2)))


def _i5a(y1, y2):
    _require(1 < y1, "I5a", "1 < y1 < y2")
    return math.pi / 2.0 * (math.sqrt((y1 + 1) * (y2 + 1)) - math.sqrt((y1 - 1) * (y2 - 1)) - 2.0)


def _i5b(y1, y2):
    _require(y2 < -1, "I5b", "y1 < y2 < -1")
    return math.pi / 2.0 * (math.sqrt((y1 - 1) * (y2 - 1)) - math.sqrt((y1 + 1) * (y2 + 1)) - 2.0)


#: name -> (closed form, weight multiplying sqrt((y2 - y)(y - y1)))
CLOSED_FORMS: dict[str, tuple[Callable[[float, float], float], Callable[[np.ndarray], np.ndarray]]] = {
    "I0": (_i0, lambda y: np.ones_like(y)),
    "I1a": (_i1a, lambda y: 1.0 / y),
    "I1b": (_i1b, lambda y: 1.0 / y),
    "I2a": (_i2a, lambda y: 1.0 / (y * y)),
    "I2b": (_i2b, lambda y: 1.0 / (y * y)),
    "I3": (_i3, lambda y: 1.0 / (1.0 + y * y)),
    "I4": (_i4, lambda y: 1.0 / (1.0 - y * y)),
    "I5a": (_i5a, lambda y: 1.0 / (y * y - 1.0)),
    "I5b": (_i5b, lambda y: 1.0 / (y * y - 1.0)),
}


def closed_form(name: str, y1: float, y2: float) -> float:
    """Tabulated value of ``int_{y1}^{y2} w(y) sqrt((y2 - y)(y - y1)) dy``.

    Raises:
        DomainError: unknown name, or (y1, y2) outside the form's region.
    """
    try:
        fn, _ = CLOSED_FORMS[name]
    except KeyError:
        raise DomainError(f"unknown closed form {name!r}; known: {', '.join(CLOSED_FORMS)}") from None
    y1, y2 = float(y1), float(y2)
    _ordered(y1, y2, name)
    return float(fn(y1, y2))


def closed_form_quadrature(name: str, y1: float, y2: float, tol: float = 1e-12) -> ActionIntegral:
    """The same integral by :func:`action_integral` on its defining integrand.

    The weight is folded into the radicand as ``w**2 (y2 - y)(y - y1)``, which
    keeps the square-root endpoints that the sine substitution removes.
    """
    closed_form(name, y1, y2)  # domain check
    _, weight = CLOSED_FORMS[name]
    pair = TurningPair(float(y1), float(y2), 0.0, (0.0, 0.0))

    def radicand(y):
        w = weight(y)
        return w * w * (y2 - y) * (y - y1)

    res = action_integral(radicand, pair, tol)
    # weight sign is constant on the interval; restore it after the square root
    sign = float(np.sign(weight(np.array([0.5 * (y1 + y2)]))[0]))
    return ActionIntegral(sign * res.value, res.estimated_error, res.node_count_used)


def _loguniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


#: name -> sampler of raw points inside the form's validity region
_REGIONS: dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "I0": lambda rng, k: rng.uniform(-5.0, 5.0, k),
    "I1a": lambda rng, k: _loguniform(rng, 1e-2, 1e2, k),
    "I1b": lambda rng, k: -_loguniform(rng, 1e-2, 1e2, k),
    "I2a": lambda rng, k: -_loguniform(rng, 1e-2, 1e2, k),
    "I2b": lambda rng, k: _loguniform(rng, 1e-2, 1e2, k),
    "I3": lambda rng, k: rng.uniform(-5.0, 5.0, k),
    "I4": lambda rng, k: rng.uniform(-0.99, 0.99, k),
    "I5a": lambda rng, k: 1.0 + _loguniform(rng, 1e-2, 1e1, k),
    "I5b": lambda rng, k: -1.0 - _loguniform(rng, 1e-2, 1e1, k),
}


def random_arguments(name: str, rng: np.random.Generator, count: int) -> list[tuple[float, float]]:
    """``count`` ordered pairs ``y1 < y2`` inside the validity region of ``name``."""
    if name not in _REGIONS:
        raise DomainError(f"unknown closed form {name!r}; known: {', '.join(CLOSED_FORMS)}")
    out: list[tuple[float, float]] = []
    while len(out) < count:
        a, b = _REGIONS[name](rng, 2)
        if a != b:
            out.append((float(min(a, b)), float(max(a, b))))
    return out
