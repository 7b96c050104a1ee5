"""SWKB integral of the rationally extended 3-D oscillator.

With ``z = x sqrt(omega/hbar)`` and ``lambda = ell/hbar`` the SWKB integral of
the extended superpotential is ``hbar`` times ``int sqrt(eta(z)) dz``, where
``eta = 2n - B(z)**2`` and ``B`` is the bracketed superpotential in units of
``sqrt(hbar omega)``. Everything here works with that dimensionless form.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import catalog
from .errors import DomainError, MoreThanTwoRoots, NoTurningPoints, ParamError, PoleError
from .quadrature import TurningPair, action_integral, find_turning_points, sign_changes

FIXTURE = "quesne_deviations.csv"
FIXTURE_LAMBDAS = (0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0)
FIXTURE_LEVELS = (1, 2, 3, 4)
FIXTURE_TOL = 1e-12
FIXTURE_FIELDS = ("lambda", "n", "integral_over_pi", "deviation")


@dataclass(frozen=True)
class DimensionlessSWKB:
    """``I / (hbar pi)`` for one ``(lambda, n)``."""

    lam: float
    n: int
    integral_over_pi: float
    deviation: float
    z1: float
    z2: float
    estimated_error: float
    nodes: int
    kernel_only: bool = False


def _bracket(z, lam: float, kernel_only: bool = False):
    z = np.asarray(z, dtype=float)
    out = 0.5 * z - lam / z
    if not kernel_only:
        out = out + 2.0 * z / (z * z + 2.0 * lam - 1.0) - 2.0 * z / (z * z + 2.0 * lam + 1.0)
    return out


def eta(z, lam: float, n: int):
    """``2n - [z/2 - lam/z + 2z/(z^2+2lam-1) - 2z/(z^2+2lam+1)]^2``.

    Raises:
        DomainError: ``z <= 0``.
        PoleError: ``z^2 + 2 lam -+ 1`` vanishes (to rounding) at some ``z``.
    """
    za = np.asarray(z, dtype=float)
    if np.any(~(za > 0)):
        raise DomainError("eta is defined for z > 0")
    z2 = za * za
    scale = z2 + 2.0 * abs(lam) + 1.0
    for shift in (-1.0, 1.0):
        d = z2 + 2.0 * lam + shift
        if np.any(np.abs(d) <= 64.0 * np.finfo(float).eps * scale):
            raise PoleError(f"z^2 + 2 lambda {'+' if shift > 0 else '-'} 1 vanishes")
    out = 2.0 * n - _bracket(za, lam) ** 2
    return float(out) if np.ndim(z) == 0 else out


def _check(lam: float, n: int) -> None:
    if not (math.isfinite(lam) and lam > 0.5):
        raise ParamError(f"lambda must exceed 1/2 (interior poles otherwise), got {lam}")
    if int(n) != n or n < 1:
        raise ParamError(f"n must be a positive integer, got {n}")


def _kernel_roots(lam: float, n: int) -> tuple[float, float]:
    # z/2 - lam/z = -+ sqrt(2n)
    s = math.sqrt(2.0 * n)
    r = math.sqrt(2.0 * n + 2.0 * lam)
    return r - s, r + s


def turning_points(lam: float, n: int, kernel_only: bool = False) -> TurningPair:
    """The two positive roots of ``eta`` (or of its kernel part).

    Raises:
        MoreThanTwoRoots: just above ``lambda = 1/2`` the first rational term
            opens a second well near the origin.
    """
    _check(lam, n)
    F = lambda z: _bracket(z, lam, kernel_only) ** 2  # noqa: E731
    zl, zr = _kernel_roots(lam, n)
    w = zr - zl
    # the well is narrow compared with its distance from the origin at large lambda
    window = (max(zl - 2.0 * w, 0.25 * zl), zr + 2.0 * w)
    # a narrow window could hide extra wells; count roots on the whole half line too
    extra = len(sign_changes(F, (0.0, math.inf), 2.0 * n)[2])
    if extra > 2:
        raise MoreThanTwoRoots(f"eta has {extra} positive roots at lambda={lam}, n={n}", count=extra)
    try:
        return find_turning_points(F, window, 2.0 * n)
    except NoTurningPoints:
        return find_turning_points(F, (0.0, math.inf), 2.0 * n)


def extended_swkb(lam: float, n: int, tol: float = 1e-10, kernel_only: bool = False) -> DimensionlessSWKB:
    """Turning points and quadrature of ``sqrt(eta)`` with full metadata."""
    pair = turning_points(lam, n, kernel_only)
    res = action_integral(lambda z: 2.0 * n - _bracket(z, lam, kernel_only) ** 2, pair, tol)
    val = res.value / math.pi
    return DimensionlessSWKB(lam, int(n), val, val - n, pair.x_L, pair.x_R, res.estimated_error, res.node_count_used, kernel_only)


def extended_swkb_deviation(lam: float, n: int, tol: float = 1e-10, kernel_only: bool = False) -> tuple[float, float]:
    """``(I/(hbar pi), I/(hbar pi) - n)`` for the extended superpotential.

    ``kernel_only`` drops the rational extension and leaves the 3-D
    oscillator, whose deviation vanishes.
    """
    r = extended_swkb(lam, n, tol, kernel_only)
    return r.integral_over_pi, r.deviation


def dimensional_integral(lam: float, n: int, hbar: float = 1.0, omega: float = 1.0, tol: float = 1e-12) -> float:
    """SWKB integral of the catalog entry in ``x`` at ``ell = lam * hbar``.

    Independent of the dimensionless route above; used to check that the
    integral is ``hbar`` times a function of ``lambda`` alone.
    """
    from .quantization import swkb_integral

    _check(lam, n)
    spec = catalog.QUESNE_EXTENDED
    params = {"omega": omega, "ell": lam * hbar}
    E = catalog.analytic_energy(spec, n, params, hbar)
    return swkb_integral(spec, params, hbar, E, tol)[0].value


# ---------------------------------------------------------------------------
# fixture table
# ---------------------------------------------------------------------------


def deviation_table(
    lambdas: Sequence[float] = FIXTURE_LAMBDAS,
    levels: Iterable[int] = FIXTURE_LEVELS,
    tol: float = FIXTURE_TOL,
) -> list[dict]:
    levels = list(levels)
    return [
        {"lambda": lam, "n": n, "integral_over_pi": r.integral_over_pi, "deviation": r.deviation}
        for lam in lambdas
        for n in levels
        for r in (extended_swkb(lam, n, tol),)
    ]


def format_table(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(FIXTURE_FIELDS)
    for r in rows:
        out.writerow([repr(float(r["lambda"])), int(r["n"]), f"{r['integral_over_pi']:.12g}", f"{r['deviation']:.12g}"])
    return buf.getvalue()


def write_fixture(path: str | Path, rows: Sequence[dict] | None = None) -> Path:
    path = Path(path)
    path.write_text(format_table(deviation_table() if rows is None else rows))
    return path


def fixture_path() -> Path:
    return Path(str(resources.files("sipwkb") / "data" / FIXTURE))


def load_fixture(path: str | Path | None = None) -> list[dict]:
    text = Path(path).read_text() if path is not None else fixture_path().read_text()
    return [
        {"lambda": float(r["lambda"]), "n": int(r["n"]), "integral_over_pi": float(r["integral_over_pi"]), "deviation": float(r["deviation"])}
        for r in csv.DictReader(io.StringIO(text))
    ]
