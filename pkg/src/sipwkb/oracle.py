"""Independent bound-state solver for ``-hbar**2 psi'' + V psi = E psi``.

The solver only ever sees sampled potential values. Levels are located by
Sturm counting: the Numerov recurrence is run in ratio form
``R_k = psi_k / psi_{k-1}`` for a whole batch of trial energies at once, and
the number of negative ratios equals the number of eigenvalues below the
trial energy. Brackets from a coarse energy scan are then shrunk by
multi-section. Dirichlet conditions are imposed at both ends of the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import catalog
from .catalog import Phase
from .errors import GridTooCoarse, InsufficientBoundStates, ParamError
from .quadrature import scan_mesh

MIN_POINTS = 2001
MAX_POINTS = 2**19 + 1
R_MIN = 1e-6
LOG_R_MIN = 1e-14
DECAY = 25.0
LEVEL_TOL = 1e-10
RICHARDSON_TOL = 1e-7
SECTIONS = 48


class BoundaryKind(str, Enum):
    HARD_WALL = "HardWall"
    DECAYING_TAIL = "DecayingTail"
    CENTRIFUGAL_REGULARIZED = "CentrifugalRegularized"


@dataclass(frozen=True)
class GridPotential:
    """Potential sampled on a grid with Dirichlet ends.

    With ``origin=None`` the grid is uniform in ``x`` with spacing ``h``. With
    a finite ``origin`` the grid is uniform in ``t = ln(x - origin)`` and the
    solver works with ``phi = psi * exp(-t/2)``, which keeps the Numerov form
    ``phi'' = (exp(2t) (V - E) / hbar**2 + 1/4) phi`` and resolves singular
    origins at fourth order.

    ``source`` (optional) re-samples the potential so the solver can refine
    the grid for its convergence check.
    """

    x: np.ndarray
    V: np.ndarray
    left: BoundaryKind
    right: BoundaryKind
    source: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False, compare=False)
    origin: float | None = None

    def __post_init__(self):
        if self.x.size < MIN_POINTS:
            raise ParamError(f"grid needs at least {MIN_POINTS} points, got {self.x.size}")
        if self.x.shape != self.V.shape:
            raise ParamError("x and V must have the same shape")
        if not np.all(np.isfinite(self.V)):
            raise ParamError("V must be finite at every grid point")

    @property
    def t(self) -> np.ndarray:
        """The uniform coordinate (``x`` itself, or ``ln(x - origin)``)."""
        return self.x if self.origin is None else np.log(self.x - self.origin)

    @property
    def h(self) -> float:
        t = self.t
        return float(t[1] - t[0])

    @property
    def N(self) -> int:
        return int(self.x.size)

    def numerov_terms(self, hbar: float) -> tuple[np.ndarray, np.ndarray]:
        """``(Q, w)`` such that the Numerov coefficient is ``h^2 (Q - E w) / (12 hbar^2)``."""
        if self.origin is None:
            return self.V, np.ones_like(self.V)
        w = (self.x - self.origin) ** 2
        return w * self.V + 0.25 * hbar * hbar, w

    @classmethod
    def sample(
        cls,
        V: Callable,
        x0: float,
        x1: float,
        N: int = MIN_POINTS,
        left=BoundaryKind.HARD_WALL,
        right=BoundaryKind.HARD_WALL,
        origin: float | None = None,
    ):
        if origin is None:
            x = np.linspace(x0, x1, N)
        else:
            x = origin + np.exp(np.linspace(math.log(x0 - origin), math.log(x1 - origin), N))
            x[0], x[-1] = x0, x1
        with np.errstate(all="ignore"):
            v = np.asarray(V(x), dtype=float) * np.ones_like(x)
        return cls(x, v, BoundaryKind(left), BoundaryKind(right), V, origin)

    def refined(self) -> "GridPotential":
        """Same interval with half the spacing."""
        if self.source is None:
            raise GridTooCoarse("cannot refine a grid without its source potential")
        return GridPotential.sample(self.source, self.x[0], self.x[-1], 2 * self.N - 1, self.left, self.right, self.origin)

    def coarsened(self) -> "GridPotential | None":
        """Every other point, when that still satisfies the size floor."""
        if self.N % 2 == 0 or (self.N + 1) // 2 < MIN_POINTS:
            return None
        return GridPotential(self.x[::2], self.V[::2], self.left, self.right, self.source, self.origin)


@dataclass(frozen=True)
class SpectrumComparison:
    analytic: list[float]
    numeric: list[float]
    rel_err: list[float]
    passed: bool
    tol: float
    kernel_analytic: list[float] | None = None
    kernel_numeric: list[float] | None = None
    kernel_rel_err: list[float] | None = None
    grid_points: int = 0
    kernel_grid_points: int = 0


# ---------------------------------------------------------------------------
# Sturm counting
# ---------------------------------------------------------------------------


class _Counter:
    """Sturm node counter for one grid.

    Deep inside a steep wall Numerov's ``1 - f`` changes sign and the count
    loses monotonicity in ``E``, so each trial energy gets its own Dirichlet
    points, moved inward to where ``f < 1/2`` at that energy. ``f >= 1/2``
    holds exactly when ``E <= T_k``, so the wall positions follow from a
    search on running maxima of ``T``.
    """

    def __init__(self, pot: GridPotential, hbar: float):
        self.Q, self.w = pot.numerov_terms(hbar)
        h = pot.h
        self.c = h * h / (12.0 * hbar * hbar)
        T = (self.Q - 0.5 / self.c) / self.w
        n = T.size
        self.mid = n // 2
        # left: suffix maxima over [k, mid), non-increasing in k
        self._left = np.maximum.accumulate(T[: self.mid][::-1])[::-1]
        # right: prefix maxima over [mid, k], non-decreasing in k
        self._right = np.maximum.accumulate(T[self.mid:])

    def f(self, k: int, E: np.ndarray) -> np.ndarray:
        return self.c * (self.Q[k] - E * self.w[k])

    def wall_indices(self, E: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.Q.size
        cnt = np.searchsorted(-self._left, -E, side="right")
        s = np.maximum(cnt - 1, 0)
        e = np.minimum(self.mid + np.searchsorted(self._right, E, side="left"), n - 1)
        return s, e

    def walls(self, E: float) -> tuple[int, int]:
        s, e = self.wall_indices(np.array([float(E)]))
        return int(s[0]), int(e[0])

    def __call__(self, E: np.ndarray) -> np.ndarray:
        E = np.atleast_1d(np.asarray(E, dtype=float))
        s, e = self.wall_indices(E)
        live = e - s >= 4
        nodes = np.zeros(E.shape, dtype=np.int64)
        if not live.any():
            return nodes
        E, s, e = E[live], s[live], e[live]
        R = np.ones_like(E)
        a_prev = np.ones_like(E)
        cnt = np.zeros(E.shape, dtype=np.int64)
        for k in range(int(s.min()) + 1, int(e.max())):
            fk = self.f(k, E)
            b = 2.0 + 10.0 * fk
            # the Dirichlet point's own coefficient is irrelevant: use sign(a_e psi_e)
            a_next = np.where(k + 1 < e, 1.0 - self.f(k + 1, E), 1.0)
            start = k == s + 1
            run = (k > s + 1) & (k < e)
            with np.errstate(divide="ignore", invalid="ignore"):
                R = np.where(start, b / a_next, np.where(run, (b - a_prev / R) / a_next, R))
            cnt += (start | run) & (R < 0)
            a_prev = np.where(start | run, 1.0 - fk, a_prev)
        nodes[live] = cnt
        return nodes


def _levels(counter: _Counter, count: int, e_lo: float, e_hi: float, scan_step: float | None, tol: float) -> list[float]:
    span = e_hi - e_lo
    m = 256 if scan_step is None else int(min(2048, max(16, math.ceil(span / scan_step))))
    grid = np.linspace(e_lo, e_hi, m + 1)
    if scan_step is not None and span > 2048 * scan_step:
        # uniform near the threshold, geometric towards a deep floor
        e_a = e_hi - 2048 * scan_step
        deep = e_a - np.geomspace(scan_step, e_a - e_lo, 64)
        grid = np.concatenate([[e_lo], deep[::-1], np.linspace(e_a, e_hi, 2049)[1:]])
    nodes = counter(grid)
    lo = np.empty(count)
    hi = np.empty(count)
    for n in range(count):
        j = int(np.argmax(nodes > n))
        lo[n], hi[n] = grid[j - 1], grid[j]
    for _ in range(200):
        width = hi - lo
        thr = np.maximum(tol, 16.0 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi)))
        active = np.nonzero(width > thr)[0]
        if active.size == 0:
            break
        frac = np.arange(1, SECTIONS + 1) / (SECTIONS + 1)
        trial = lo[active, None] + width[active, None] * frac[None, :]
        cnt = counter(trial.ravel()).reshape(trial.shape)
        for row, n in enumerate(active):
            above = cnt[row] > n
            k = int(np.argmax(above)) if above.any() else SECTIONS
            new_lo = lo[n] if k == 0 else trial[row, k - 1]
            new_hi = hi[n] if k == SECTIONS else trial[row, k]
            lo[n], hi[n] = new_lo, new_hi
    return [float(v) for v in 0.5 * (lo + hi)]


def _solve_once(pot: GridPotential, hbar: float, count: int, scan_step: float | None, tol: float) -> list[float]:
    V = pot.V
    tails = [v for v, kind in ((V[0], pot.left), (V[-1], pot.right)) if kind is BoundaryKind.DECAYING_TAIL]
    inner = V[1:-1]
    counter = _Counter(pot, hbar)
    e_lo = float(np.min(inner)) - 1.0
    if counter(np.array([e_lo]))[0] != 0:
        raise GridTooCoarse("levels found below the potential minimum")
    if tails:
        e_hi = float(min(tails))
    else:
        # walls on both sides: every level is bound, raise the ceiling until enough fit
        e_hi = float(np.min(inner)) + 1.0
        for _ in range(200):
            if counter(np.array([e_hi]))[0] >= count:
                break
            e_hi += 2.0 * (e_hi - e_lo)
    have = int(counter(np.array([e_hi]))[0])
    if have < count:
        raise InsufficientBoundStates(f"only {have} level(s) below the threshold {e_hi:.6g}; {count} requested")
    return _levels(counter, count, e_lo, e_hi, scan_step, tol)


def _converge(
    pot: GridPotential,
    hbar: float,
    count: int,
    scan_step: float | None,
    tol: float,
    richardson_tol: float,
    max_points: int,
) -> tuple[list[float], int]:
    cur = _solve_once(pot, hbar, count, scan_step, tol)
    if pot.source is None:
        coarse = pot.coarsened()
        if coarse is None:
            raise GridTooCoarse("grid has no source for refinement and cannot be coarsened")
        prev = _solve_once(coarse, hbar, count, scan_step, tol)
        if _shift(prev, cur) <= richardson_tol:
            return cur, pot.N
        raise GridTooCoarse(f"levels moved by {_shift(prev, cur):.3e} between 2h and h")
    grid = pot
    while True:
        if 2 * grid.N - 1 > max_points:
            raise GridTooCoarse(f"levels still moving at N={grid.N}")
        grid = grid.refined()
        nxt = _solve_once(grid, hbar, count, scan_step, tol)
        if _shift(cur, nxt) <= richardson_tol:
            return nxt, grid.N
        cur = nxt


def solve_bound_states(
    pot: GridPotential,
    hbar: float = 1.0,
    count: int = 1,
    scan_step: float | None = None,
    tol: float = LEVEL_TOL,
    richardson_tol: float = RICHARDSON_TOL,
    max_points: int = MAX_POINTS,
) -> list[float]:
    """Lowest ``count`` eigenvalues, ordered by node count.

    The grid is halved until every level moves by at most
    ``richardson_tol * max(1, |E|)`` between spacing ``h`` and ``h/2``; the
    finer result is returned. A grid without a ``source`` is checked against
    its own every-other-point subgrid instead.

    Raises:
        InsufficientBoundStates: fewer than ``count`` levels below
            ``min(V[0], V[-1])``.
        GridTooCoarse: the convergence check still fails at ``max_points``.
    """
    if count < 1:
        raise ParamError("count must be positive")
    return _converge(pot, hbar, count, scan_step, tol, richardson_tol, max_points)[0]


def _shift(a: Sequence[float], b: Sequence[float]) -> float:
    return max(abs(x - y) / max(1.0, abs(y)) for x, y in zip(a, b))


def eigenfunction(pot: GridPotential, hbar: float, E: float) -> np.ndarray:
    """Numerov solution at energy ``E`` matched at the rightmost turning point.

    Outward and inward sweeps are scaled to agree at the matching point, so
    the result is accurate in both forbidden tails. Returned as ``psi`` on
    ``pot.x``, normalised to max 1.
    """
    counter = _Counter(pot, hbar)
    f = counter.c * (counter.Q - E * counter.w)
    n = f.size
    s, e = counter.walls(E)
    allowed = np.nonzero(pot.V[s:e + 1] < E)[0]
    m = s + int(allowed[-1]) if allowed.size else (s + e) // 2
    m = min(max(m, s + 2), e - 2)
    a = 1.0 - f
    b = 2.0 + 10.0 * f
    out = np.zeros(n)
    out[s + 1] = 1e-30
    for k in range(s + 1, m + 1):
        out[k + 1] = (b[k] * out[k] - a[k - 1] * out[k - 1]) / a[k + 1]
        if abs(out[k + 1]) > 1e100:
            out[: k + 2] *= 1e-100
    inn = np.zeros(n)
    inn[e - 1] = 1e-30
    for k in range(e - 1, m - 1, -1):
        inn[k - 1] = (b[k] * inn[k] - a[k + 1] * inn[k + 1]) / a[k - 1]
        if abs(inn[k - 1]) > 1e100:
            inn[k - 1:] *= 1e-100
    scale = out[m] / inn[m] if inn[m] != 0 else 1.0
    psi = np.concatenate([out[: m + 1], scale * inn[m + 1:]])
    if pot.origin is not None:
        psi = psi * np.sqrt(pot.x - pot.origin)
    return psi / np.max(np.abs(psi))


def count_sign_changes(psi: np.ndarray, floor: float = 1e-8) -> int:
    """Interior sign changes of ``psi``, ignoring values below ``floor``."""
    vals = psi[np.abs(psi) > floor * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.sign(vals[1:]) != np.sign(vals[:-1])))


# ---------------------------------------------------------------------------
# grids from catalog entries
# ---------------------------------------------------------------------------


def partner_function(spec, params, hbar: float = 1.0, side: str = "minus") -> Callable[[np.ndarray], np.ndarray]:
    p = spec.validate(params)
    sgn = -1.0 if side == "minus" else 1.0

    def V(x):
        with np.errstate(all="ignore"):
            w = spec.W(x, p, hbar)
            return w * w + sgn * hbar * spec.dW(x, p, hbar)

    return V


def _tail_edge(V: Callable, x_t: float, x_far: float, E: float, hbar: float, decay: float) -> float:
    """Point beyond ``x_t`` (towards ``x_far``) where the decay exponent reaches ``decay``."""
    total = 0.0
    x = x_t
    step = max(1e-3, 1e-3 * abs(x_t))
    direction = 1.0 if x_far > x_t else -1.0
    for _ in range(20000):
        nxt = x + direction * step
        if (direction > 0 and nxt >= x_far) or (direction < 0 and nxt <= x_far):
            return x_far
        k0 = math.sqrt(max(float(V(np.array([x]))[0]) - E, 0.0)) / hbar
        k1 = math.sqrt(max(float(V(np.array([nxt]))[0]) - E, 0.0)) / hbar
        total += 0.5 * (k0 + k1) * step
        x = nxt
        if total >= decay:
            return x
        step *= 1.05
    raise InsufficientBoundStates("potential does not confine the requested levels")


def build_grid(
    spec,
    params,
    hbar: float = 1.0,
    side: str = "minus",
    E_target: float = 0.0,
    N: int = MIN_POINTS,
    r_min: float | None = None,
    decay: float = DECAY,
) -> GridPotential:
    """Truncated grid for a catalog partner potential.

    Finite edges are moved inward by ``r_min`` (default ``R_MIN`` for a
    finite interval, ``LOG_R_MIN`` for the origin of a half line, which is
    sampled on a logarithmic grid). Infinite edges sit where the
    decay exponent ``int sqrt(V - E_target) / hbar`` beyond the outer turning
    point reaches ``decay``, and at least half a well width (or 1.5x the turning
    radius on a half line) beyond it.
    """
    V = partner_function(spec, params, hbar, side)
    lo, hi = spec.domain
    mesh = scan_mesh(spec.domain, 8192)
    vm = V(mesh)
    allowed = np.nonzero(np.isfinite(vm) & (vm < E_target))[0]
    if allowed.size == 0:
        raise InsufficientBoundStates(f"no classically allowed region below E={E_target}")
    xl_t, xr_t = float(mesh[allowed[0]]), float(mesh[allowed[-1]])
    width = max(xr_t - xl_t, 1e-3)
    if math.isinf(lo):
        edge = _tail_edge(V, xl_t, -1e6, E_target, hbar, decay)
        x0 = min(edge, xl_t - 0.5 * width)
        left = BoundaryKind.DECAYING_TAIL
    else:
        half_line = math.isinf(hi)
        x0 = lo + (r_min if r_min is not None else LOG_R_MIN if half_line else R_MIN)
        left = BoundaryKind.CENTRIFUGAL_REGULARIZED if half_line else BoundaryKind.HARD_WALL
    if math.isinf(hi):
        edge = _tail_edge(V, xr_t, 1e6, E_target, hbar, decay)
        floor = 1.5 * xr_t if lo == 0.0 else xr_t + 0.5 * width
        x1 = max(edge, floor)
        right = BoundaryKind.DECAYING_TAIL
    else:
        x1 = hi - (R_MIN if r_min is None else r_min)
        right = BoundaryKind.HARD_WALL
    origin = lo if (math.isfinite(lo) and math.isinf(hi)) else None
    return GridPotential.sample(V, x0, x1, N, left, right, origin)


def _analytic_levels(spec, p: dict, hbar: float, count: int, phase: Phase) -> list[float]:
    return [catalog.analytic_energy(spec, n, p, hbar, phase) for n in range(count)]


def oracle_levels(spec, params, hbar: float = 1.0, count: int = 5, side: str = "minus", phase: Phase | str | None = None, **grid_kw) -> tuple[list[float], int]:
    """Numeric levels of a catalog partner potential and the final grid size."""
    p = spec.validate(params)
    base = spec.kernel if getattr(spec, "extended", False) else spec
    kp = spec.kernel_params(p) if getattr(spec, "extended", False) else p
    phase = base.phase_rule(kp) if phase is None else Phase(phase)
    ana = _analytic_levels(base, kp, hbar, count, phase)
    gaps = np.diff(ana) if count > 1 else np.array([max(1.0, abs(ana[0]))])
    top = ana[-1] + 0.5 * float(np.min(gaps))
    pot = build_grid(spec, p, hbar, side, top, **grid_kw)
    return _converge(pot, hbar, count, 0.5 * float(np.min(gaps)), LEVEL_TOL, RICHARDSON_TOL, MAX_POINTS)


def _rel(num: Sequence[float], ana: Sequence[float]) -> list[float]:
    return [abs(x - y) / max(1.0, abs(y)) for x, y in zip(num, ana)]


def compare_spectra(
    spec,
    params,
    hbar: float = 1.0,
    count: int = 5,
    tol: float = 1e-6,
    phase: Phase | str | None = None,
    side: str = "minus",
) -> SpectrumComparison:
    """Numeric spectrum of a partner potential against the closed forms.

    Relative errors use ``max(1, |E|)`` as the scale so a zero ground state is
    compared absolutely. For an extended entry the kernel's own partner
    potential is solved as well, and both spectra are compared level by level.
    """
    p = spec.validate(params)
    extended = getattr(spec, "extended", False)
    base = spec.kernel if extended else spec
    kp = spec.kernel_params(p) if extended else p
    phase = base.phase_rule(kp) if phase is None else Phase(phase)
    ana = _analytic_levels(base, kp, hbar, count, phase)
    num, size = oracle_levels(spec, p, hbar, count, side, phase)
    rel = _rel(num, ana)
    ok = max(rel) <= tol
    if not extended:
        return SpectrumComparison(ana, num, rel, ok, tol, grid_points=size)
    knum, ksize = oracle_levels(base, kp, hbar, count, side, phase)
    krel = _rel(num, knum)
    ok = ok and max(krel) <= tol
    return SpectrumComparison(ana, num, rel, ok, tol, ana, knum, krel, size, ksize)
