"""Catalog of shape-invariant superpotentials.

Conventions
-----------
The Hamiltonian is ``H = -hbar**2 d^2/dx^2 + V`` and the partner potentials are
``V_minus = W**2 - hbar W'`` and ``V_plus = W**2 + hbar W'``. Every conventional
entry is written as ``W(x, a) = a f1(x) + f2(x) + u(a)`` with shape invariance
under ``a -> a + hbar`` and ``E_n = g(a + n hbar) - g(a)``.

Parameters are always passed as a mapping keyed by the entry's own symbols
(``A``, ``B``, ``omega``, ``ell``, ``e2`` ...). Each entry knows how to map those
symbols to the shape-invariance parameter ``a`` and back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate

from .errors import (
    DomainError,
    IndeterminateSign,
    NotApplicable,
    ParamError,
    PhaseError,
    PoleError,
    RangeError,
)

Params = Mapping[str, float]
ArrayLike = "float | np.ndarray"


class Phase(str, Enum):
    UNBROKEN = "Unbroken"
    BROKEN = "Broken"
    NO_BOUND_STATES = "NoBoundStates"


class SIType(str, Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"


class SIClass(str, Enum):
    IA = "IA"
    IB = "IB"
    IIA = "IIA"
    IIB1 = "IIB1"
    IIB2 = "IIB2"
    IIB3 = "IIB3"
    IIIA = "IIIA"
    IIIB1 = "IIIB1"
    IIIB2 = "IIIB2"
    IIIB3 = "IIIB3"


#: classes whose W can have an interior extremum, hence broken-phase bound states
BROKEN_CAPABLE = frozenset({SIClass.IIIA, SIClass.IIIB1, SIClass.IIIB3})


@dataclass(frozen=True)
class Param:
    """One named parameter with a validity predicate."""

    name: str
    check: Callable[[float], bool]
    rule: str


@dataclass(frozen=True)
class PhaseReport:
    phase: Phase
    sign_left: int
    sign_right: int
    evidence: str


def _real(x: float) -> bool:
    return math.isfinite(x)


def _pos(x: float) -> bool:
    return math.isfinite(x) and x > 0


def _nonzero(x: float) -> bool:
    return math.isfinite(x) and x != 0


def _last_below(limit: float) -> int:
    """Largest integer n >= 0 with n < limit, or -1 when there is none."""
    if not limit > 0:
        return -1
    return int(math.ceil(limit)) - 1


class _SpecMixin:
    """Parameter handling shared by conventional and extended entries."""

    name: str
    param_schema: tuple[Param, ...]
    joint_checks: tuple[tuple[Callable[[dict], bool], str], ...]
    domain: tuple[float, float]
    a_param: str | None
    a_sign: float
    defaults: dict

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.param_schema)

    def validate(self, params: Params) -> dict:
        """Return a float copy of ``params`` or raise :class:`ParamError`."""
        names = self.param_names
        unknown = set(params) - set(names)
        if unknown:
            raise ParamError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        out = {}
        for p in self.param_schema:
            if p.name not in params:
                raise ParamError(f"{self.name}: missing parameter {p.name!r}")
            try:
                val = float(params[p.name])
            except (TypeError, ValueError) as exc:
                raise ParamError(f"{self.name}: {p.name} is not a number") from exc
            if not p.check(val):
                raise ParamError(f"{self.name}: {p.name}={val!r} violates {p.name} {p.rule}")
            out[p.name] = val
        for check, rule in self.joint_checks:
            if not check(out):
                raise ParamError(f"{self.name}: parameters {out} violate {rule}")
        return out

    def params(self, **overrides: float) -> dict:
        """Default parameters updated with ``overrides`` and validated."""
        merged = dict(self.defaults)
        merged.update(overrides)
        return self.validate(merged)

    def a_of(self, params: Params) -> float:
        if self.a_param is None:
            return float(params.get("a", 0.0))
        return self.a_sign * float(params[self.a_param])

    def with_a(self, params: Params, a: float) -> dict:
        """Parameter set whose shape-invariance parameter equals ``a``."""
        out = dict(params)
        if self.a_param is not None:
            out[self.a_param] = a / self.a_sign
        return out

    def check_x(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if not np.all(np.isfinite(xs)) or np.any(xs <= lo) or np.any(xs >= hi):
            raise DomainError(f"{self.name}: x must lie strictly inside ({lo}, {hi})")
        return xs


@dataclass(frozen=True)
class SuperpotentialSpec(_SpecMixin):
    """A conventional shape-invariant superpotential.

    Callables take ``(x, p)`` or ``(a, p)`` where ``p`` is the validated
    parameter dict. ``hbar`` only enters through the spectrum and the partner
    potentials.
    """

    name: str
    title: str
    si_type: SIType | None
    si_class: SIClass
    param_schema: tuple[Param, ...]
    domain: tuple[float, float]
    a_param: str | None
    a_sign: float
    w: Callable[[np.ndarray, dict], np.ndarray]
    dw: Callable[[np.ndarray, dict], np.ndarray]
    f1: Callable[[np.ndarray, dict], np.ndarray]
    df1: Callable[[np.ndarray, dict], np.ndarray]
    f2: Callable[[np.ndarray, dict], np.ndarray]
    u: Callable[[float, dict], float]
    du: Callable[[float, dict], float]
    g: Callable[[float, dict], float]
    dg: Callable[[float, dict], float]
    class_constants: Callable[[dict], dict]
    energy_unbroken: Callable[[int, dict, float], float]
    max_level_unbroken: Callable[[dict, float], int | None]
    phase_rule: Callable[[dict], Phase]
    defaults: dict
    samples: tuple[dict, ...]
    window: tuple[float, float]
    joint_checks: tuple[tuple[Callable[[dict], bool], str], ...] = ()
    energy_broken: Callable[[int, dict, float], float] | None = None
    max_level_broken: Callable[[dict, float], int | None] | None = None
    broken_defaults: dict | None = None
    extended: bool = field(default=False, init=False)

    def W(self, x, params: Params, hbar: float = 1.0):
        return self.w(np.asarray(x, dtype=float), params)

    def dW(self, x, params: Params, hbar: float = 1.0):
        return self.dw(np.asarray(x, dtype=float), params)

    def langer_shift(self, x, params: Params, hbar: float = 1.0):
        """Langer correction ``(hbar**2 / 4) f1'(x)`` added to V_minus."""
        return 0.25 * hbar * hbar * self.df1(np.asarray(x, dtype=float), params)


@dataclass(frozen=True)
class ExtendedSpec(_SpecMixin):
    """A rationally extended superpotential ``W0 + W_h``.

    The extension is isospectral with its kernel, so the spectrum is delegated
    to the kernel entry. ``kernel_params`` maps the extended parameters onto
    the kernel's.
    """

    name: str
    title: str
    kernel: SuperpotentialSpec
    param_schema: tuple[Param, ...]
    domain: tuple[float, float]
    a_param: str | None
    a_sign: float
    kernel_params: Callable[[dict], dict]
    w_h: Callable[[np.ndarray, dict, float], np.ndarray]
    dw_h: Callable[[np.ndarray, dict, float], np.ndarray]
    g: Callable[[float, dict], float]
    defaults: dict
    window: tuple[float, float]
    joint_checks: tuple[tuple[Callable[[dict], bool], str], ...] = ()
    w_full: Callable[[np.ndarray, dict, float], np.ndarray] | None = None
    dw_full: Callable[[np.ndarray, dict, float], np.ndarray] | None = None
    extended: bool = field(default=True, init=False)

    @property
    def si_class(self) -> SIClass:
        return self.kernel.si_class

    @property
    def si_type(self):
        return None

    def W(self, x, params: Params, hbar: float = 1.0):
        x = np.asarray(x, dtype=float)
        if self.w_full is not None:
            return self.w_full(x, params, hbar)
        return self.kernel.w(x, self.kernel_params(params)) + self.w_h(x, params, hbar)

    def dW(self, x, params: Params, hbar: float = 1.0):
        x = np.asarray(x, dtype=float)
        if self.dw_full is not None:
            return self.dw_full(x, params, hbar)
        return self.kernel.dw(x, self.kernel_params(params)) + self.dw_h(x, params, hbar)


AnySpec = "SuperpotentialSpec | ExtendedSpec"

# ---------------------------------------------------------------------------
# entries
# ---------------------------------------------------------------------------

_INF = math.inf


def _coth(x):
    return 1.0 / np.tanh(x)


def _csch(x):
    return 1.0 / np.sinh(x)


def _sech(x):
    return 1.0 / np.cosh(x)


def _zero(x, p):
    return np.zeros_like(np.asarray(x, dtype=float))


def _sgn_phase(left: float, right: float) -> Phase:
    if left < 0 < right:
        return Phase.UNBROKEN
    if left > 0 > right:
        return Phase.NO_BOUND_STATES
    return Phase.BROKEN


HARMONIC = SuperpotentialSpec(
    name="harmonic",
    title="Harmonic oscillator",
    si_type=SIType.TYPE_II,
    si_class=SIClass.IA,
    param_schema=(Param("omega", _pos, "> 0"),),
    domain=(-_INF, _INF),
    a_param=None,
    a_sign=1.0,
    w=lambda x, p: 0.5 * p["omega"] * x,
    dw=lambda x, p: 0.5 * p["omega"] + 0.0 * x,
    f1=_zero,
    df1=_zero,
    f2=lambda x, p: 0.5 * p["omega"] * x,
    u=lambda a, p: 0.0,
    du=lambda a, p: 0.0,
    g=lambda a, p: p["omega"] * a,
    dg=lambda a, p: p["omega"],
    class_constants=lambda p: {"alpha": 0.0, "omega": p["omega"]},
    energy_unbroken=lambda n, p, h: n * h * p["omega"],
    max_level_unbroken=lambda p, h: None,
    phase_rule=lambda p: Phase.UNBROKEN,
    defaults={"omega": 1.0},
    samples=({"omega": 1.0}, {"omega": 2.0}, {"omega": 0.5}),
    window=(-6.0, 6.0),
)

MORSE = SuperpotentialSpec(
    name="morse",
    title="Morse",
    si_type=SIType.TYPE_II,
    si_class=SIClass.IB,
    param_schema=(Param("A", _nonzero, "!= 0"),),
    domain=(-_INF, _INF),
    a_param="A",
    a_sign=-1.0,
    w=lambda x, p: p["A"] - np.exp(-x),
    dw=lambda x, p: np.exp(-x),
    f1=_zero,
    df1=_zero,
    f2=lambda x, p: -np.exp(-x),
    u=lambda a, p: -a,
    du=lambda a, p: -1.0,
    g=lambda a, p: -a * a,
    dg=lambda a, p: -2.0 * a,
    class_constants=lambda p: {"alpha": -1.0, "omega": 0.0},
    energy_unbroken=lambda n, p, h: p["A"] ** 2 - (p["A"] - n * h) ** 2,
    max_level_unbroken=lambda p, h: _last_below(p["A"] / h),
    phase_rule=lambda p: _sgn_phase(-1.0, p["A"]),
    defaults={"A": 10.0},
    samples=({"A": 10.0}, {"A": 12.5}, {"A": 20.0}),
    window=(-2.5, 6.0),
)

COULOMB = SuperpotentialSpec(
    name="coulomb",
    title="Coulomb",
    si_type=None,
    si_class=SIClass.IIA,
    param_schema=(Param("e2", _pos, "> 0"), Param("ell", _nonzero, "!= 0")),
    domain=(0.0, _INF),
    a_param="ell",
    a_sign=1.0,
    w=lambda x, p: -p["ell"] / x + p["e2"] / (2.0 * p["ell"]),
    dw=lambda x, p: p["ell"] / (x * x),
    f1=lambda x, p: -1.0 / x,
    df1=lambda x, p: 1.0 / (x * x),
    f2=_zero,
    u=lambda a, p: p["e2"] / (2.0 * a),
    du=lambda a, p: -p["e2"] / (2.0 * a * a),
    g=lambda a, p: -(0.5 * p["e2"]) ** 2 / (a * a),
    dg=lambda a, p: 2.0 * (0.5 * p["e2"]) ** 2 / a**3,
    class_constants=lambda p: {"lambda": 0.0, "B": 0.5 * p["e2"]},
    energy_unbroken=lambda n, p, h: 0.25 * p["e2"] ** 2 * (1.0 / p["ell"] ** 2 - 1.0 / (p["ell"] + n * h) ** 2),
    max_level_unbroken=lambda p, h: None,
    phase_rule=lambda p: _sgn_phase(-p["ell"], p["e2"] / p["ell"]),
    defaults={"e2": 2.0, "ell": 1.0},
    samples=({"e2": 2.0, "ell": 1.0}, {"e2": 5.0, "ell": 2.5}, {"e2": 1.0, "ell": 0.75}),
    window=(0.05, 40.0),
)

ROSEN_MORSE_TRIG = SuperpotentialSpec(
    name="rosen-morse-trig",
    title="Rosen-Morse I (trigonometric)",
    si_type=SIType.TYPE_I,
    si_class=SIClass.IIB1,
    param_schema=(Param("A", _pos, "> 0"), Param("B", _real, "real")),
    domain=(0.0, math.pi),
    a_param="A",
    a_sign=1.0,
    w=lambda x, p: -p["A"] / np.tan(x) - p["B"] / p["A"],
    dw=lambda x, p: p["A"] / np.sin(x) ** 2,
    f1=lambda x, p: -1.0 / np.tan(x),
    df1=lambda x, p: 1.0 / np.sin(x) ** 2,
    f2=_zero,
    u=lambda a, p: -p["B"] / a,
    du=lambda a, p: p["B"] / (a * a),
    g=lambda a, p: a * a - p["B"] ** 2 / (a * a),
    dg=lambda a, p: 2.0 * a + 2.0 * p["B"] ** 2 / a**3,
    class_constants=lambda p: {"lambda": -1.0, "B": -p["B"]},
    energy_unbroken=lambda n, p, h: (
        (p["A"] + n * h) ** 2 - p["A"] ** 2 + p["B"] ** 2 / p["A"] ** 2 - p["B"] ** 2 / (p["A"] + n * h) ** 2
    ),
    max_level_unbroken=lambda p, h: None,
    phase_rule=lambda p: Phase.UNBROKEN,
    defaults={"A": 2.0, "B": 1.0},
    samples=({"A": 2.0, "B": 1.0}, {"A": 1.0, "B": -3.0}, {"A": 4.5, "B": 10.0}),
    window=(0.05, math.pi - 0.05),
)

ROSEN_MORSE_HYP = SuperpotentialSpec(
    name="rosen-morse-hyp",
    title="Rosen-Morse II (hyperbolic)",
    si_type=None,
    si_class=SIClass.IIB2,
    param_schema=(Param("A", _pos, "> 0"), Param("B", _real, "real")),
    joint_checks=((lambda p: abs(p["B"]) != p["A"] ** 2, "|B| != A**2"),),
    domain=(-_INF, _INF),
    a_param="A",
    a_sign=-1.0,
    w=lambda x, p: p["A"] * np.tanh(x) + p["B"] / p["A"],
    dw=lambda x, p: p["A"] * _sech(x) ** 2,
    f1=lambda x, p: -np.tanh(x),
    df1=lambda x, p: -_sech(x) ** 2,
    f2=_zero,
    u=lambda a, p: -p["B"] / a,
    du=lambda a, p: p["B"] / (a * a),
    g=lambda a, p: -p["B"] ** 2 / (a * a) - a * a,
    dg=lambda a, p: 2.0 * p["B"] ** 2 / a**3 - 2.0 * a,
    class_constants=lambda p: {"lambda": 1.0, "B": -p["B"]},
    energy_unbroken=lambda n, p, h: (
        p["A"] ** 2 - (p["A"] - n * h) ** 2 + p["B"] ** 2 / p["A"] ** 2 - p["B"] ** 2 / (p["A"] - n * h) ** 2
    ),
    max_level_unbroken=lambda p, h: _last_below((p["A"] - math.sqrt(abs(p["B"]))) / h),
    phase_rule=lambda p: _sgn_phase(-p["A"] + p["B"] / p["A"], p["A"] + p["B"] / p["A"]),
    defaults={"A": 12.0, "B": 4.0},
    samples=({"A": 12.0, "B": 4.0}, {"A": 15.0, "B": -20.0}, {"A": 10.0, "B": 0.5}),
    window=(-5.0, 5.0),
)

ECKART = SuperpotentialSpec(
    name="eckart",
    title="Eckart",
    si_type=None,
    si_class=SIClass.IIB3,
    param_schema=(Param("A", _pos, "> 0"), Param("B", _pos, "> 0")),
    joint_checks=((lambda p: p["B"] != p["A"] ** 2, "B != A**2"),),
    domain=(0.0, _INF),
    a_param="A",
    a_sign=1.0,
    w=lambda x, p: -p["A"] * _coth(x) + p["B"] / p["A"],
    dw=lambda x, p: p["A"] * _csch(x) ** 2,
    f1=lambda x, p: -_coth(x),
    df1=lambda x, p: _csch(x) ** 2,
    f2=_zero,
    u=lambda a, p: p["B"] / a,
    du=lambda a, p: -p["B"] / (a * a),
    g=lambda a, p: -p["B"] ** 2 / (a * a) - a * a,
    dg=lambda a, p: 2.0 * p["B"] ** 2 / a**3 - 2.0 * a,
    class_constants=lambda p: {"lambda": 1.0, "B": p["B"]},
    energy_unbroken=lambda n, p, h: (
        p["A"] ** 2 - (p["A"] + n * h) ** 2 + p["B"] ** 2 / p["A"] ** 2 - p["B"] ** 2 / (p["A"] + n * h) ** 2
    ),
    max_level_unbroken=lambda p, h: _last_below((math.sqrt(p["B"]) - p["A"]) / h),
    phase_rule=lambda p: _sgn_phase(-1.0, -p["A"] + p["B"] / p["A"]),
    defaults={"A": 1.0, "B": 100.0},
    samples=({"A": 1.0, "B": 100.0}, {"A": 2.0, "B": 150.0}, {"A": 0.75, "B": 80.0}),
    window=(0.02, 4.0),
)

OSCILLATOR_3D = SuperpotentialSpec(
    name="3d-oscillator",
    title="Three-dimensional oscillator",
    si_type=SIType.TYPE_II,
    si_class=SIClass.IIIA,
    param_schema=(Param("omega", _pos, "> 0"), Param("ell", _nonzero, "!= 0")),
    domain=(0.0, _INF),
    a_param="ell",
    a_sign=1.0,
    w=lambda x, p: 0.5 * p["omega"] * x - p["ell"] / x,
    dw=lambda x, p: 0.5 * p["omega"] + p["ell"] / (x * x),
    f1=lambda x, p: -1.0 / x,
    df1=lambda x, p: 1.0 / (x * x),
    f2=lambda x, p: 0.5 * p["omega"] * x,
    u=lambda a, p: 0.0,
    du=lambda a, p: 0.0,
    g=lambda a, p: 2.0 * p["omega"] * a,
    dg=lambda a, p: 2.0 * p["omega"],
    class_constants=lambda p: {"lambda": 0.0, "omega": 2.0 * p["omega"]},
    energy_unbroken=lambda n, p, h: 2.0 * n * h * p["omega"],
    max_level_unbroken=lambda p, h: None,
    phase_rule=lambda p: _sgn_phase(-p["ell"], 1.0),
    defaults={"omega": 1.0, "ell": 3.0},
    samples=({"omega": 1.0, "ell": 3.0}, {"omega": 2.0, "ell": 1.5}, {"omega": 0.5, "ell": 5.0}),
    window=(0.05, 12.0),
    energy_broken=lambda n, p, h: (2 * n + 1) * h * p["omega"] - 2.0 * p["ell"] * p["omega"],
    max_level_broken=lambda p, h: None,
    broken_defaults={"omega": 1.0, "ell": -3.0},
)

SCARF_TRIG = SuperpotentialSpec(
    name="scarf-trig",
    title="Scarf I (trigonometric)",
    si_type=SIType.TYPE_I,
    si_class=SIClass.IIIB1,
    param_schema=(Param("A", _real, "real"), Param("B", _real, "real")),
    joint_checks=((lambda p: abs(p["A"]) != abs(p["B"]), "|A| != |B|"),),
    domain=(-0.5 * math.pi, 0.5 * math.pi),
    a_param="A",
    a_sign=1.0,
    w=lambda x, p: p["A"] * np.tan(x) - p["B"] / np.cos(x),
    dw=lambda x, p: (p["A"] - p["B"] * np.sin(x)) / np.cos(x) ** 2,
    f1=lambda x, p: np.tan(x),
    df1=lambda x, p: 1.0 / np.cos(x) ** 2,
    f2=lambda x, p: -p["B"] / np.cos(x),
    u=lambda a, p: 0.0,
    du=lambda a, p: 0.0,
    g=lambda a, p: a * a,
    dg=lambda a, p: 2.0 * a,
    class_constants=lambda p: {"lambda": -1.0, "B": -p["B"]},
    energy_unbroken=lambda n, p, h: (p["A"] + n * h) ** 2 - p["A"] ** 2,
    max_level_unbroken=lambda p, h: None,
    phase_rule=lambda p: _sgn_phase(-(p["A"] + p["B"]), p["A"] - p["B"]),
    defaults={"A": 3.0, "B": 1.0},
    samples=({"A": 3.0, "B": 1.0}, {"A": 2.5, "B": -1.5}, {"A": 6.0, "B": 4.0}),
    window=(-0.5 * math.pi + 0.05, 0.5 * math.pi - 0.05),
    energy_broken=lambda n, p, h: (abs(p["B"]) + (n + 0.5) * h) ** 2 - p["A"] ** 2,
    max_level_broken=lambda p, h: None,
    broken_defaults={"A": 1.0, "B": 3.0},
)

SCARF_HYP = SuperpotentialSpec(
    name="scarf-hyp",
    title="Scarf II (hyperbolic)",
    si_type=None,
    si_class=SIClass.IIIB2,
    param_schema=(Param("A", _pos, "> 0"), Param("B", _real, "real")),
    domain=(-_INF, _INF),
    a_param="A",
    a_sign=-1.0,
    w=lambda x, p: p["A"] * np.tanh(x) + p["B"] * _sech(x),
    dw=lambda x, p: (p["A"] - p["B"] * np.sinh(x)) * _sech(x) ** 2,
    f1=lambda x, p: -np.tanh(x),
    df1=lambda x, p: -_sech(x) ** 2,
    f2=lambda x, p: p["B"] * _sech(x),
    u=lambda a, p: 0.0,
    du=lambda a, p: 0.0,
    g=lambda a, p: -a * a,
    dg=lambda a, p: -2.0 * a,
    class_constants=lambda p: {"lambda": 1.0, "B": p["B"]},
    energy_unbroken=lambda n, p, h: p["A"] ** 2 - (p["A"] - n * h) ** 2,
    max_level_unbroken=lambda p, h: _last_below(p["A"] / h),
    phase_rule=lambda p: Phase.UNBROKEN,
    defaults={"A": 10.0, "B": 2.0},
    samples=({"A": 10.0, "B": 2.0}, {"A": 12.0, "B": -5.0}, {"A": 9.5, "B": 0.0}),
    window=(-5.0, 5.0),
)

POSCHL_TELLER = SuperpotentialSpec(
    name="poschl-teller",
    title="Generalized Poschl-Teller",
    si_type=None,
    si_class=SIClass.IIIB3,
    param_schema=(Param("A", _nonzero, "!= 0"), Param("B", _real, "real")),
    joint_checks=((lambda p: p["A"] != p["B"], "A != B"),),
    domain=(0.0, _INF),
    a_param="A",
    a_sign=-1.0,
    w=lambda x, p: p["A"] * _coth(x) - p["B"] * _csch(x),
    dw=lambda x, p: (p["B"] * np.cosh(x) - p["A"]) * _csch(x) ** 2,
    f1=lambda x, p: -_coth(x),
    df1=lambda x, p: _csch(x) ** 2,
    f2=lambda x, p: -p["B"] * _csch(x),
    u=lambda a, p: 0.0,
    du=lambda a, p: 0.0,
    g=lambda a, p: -a * a,
    dg=lambda a, p: -2.0 * a,
    class_constants=lambda p: {"lambda": 1.0, "B": -p["B"]},
    energy_unbroken=lambda n, p, h: p["A"] ** 2 - (p["A"] - n * h) ** 2,
    max_level_unbroken=lambda p, h: _last_below(p["A"] / h),
    phase_rule=lambda p: _sgn_phase(p["A"] - p["B"], p["A"]),
    defaults={"A": 10.0, "B": 12.0},
    samples=({"A": 10.0, "B": 12.0}, {"A": 12.0, "B": 20.0}, {"A": 9.5, "B": 11.0}),
    window=(0.02, 8.0),
    energy_broken=lambda n, p, h: p["A"] ** 2 - (abs(p["B"]) - (n + 0.5) * h) ** 2,
    max_level_broken=lambda p, h: _last_below(abs(p["B"]) / h - 0.5),
    broken_defaults={"A": 20.0, "B": 10.0},
)


# --- rational extensions ----------------------------------------------------


def _quesne_wh(x, p, hbar):
    w, l = p["omega"], p["ell"]
    d1 = w * x * x + 2.0 * l - hbar
    d2 = w * x * x + 2.0 * l + hbar
    if np.any(d1 == 0) or np.any(d2 == 0):
        raise PoleError("quesne-extended: pole of the rational term")
    return 2.0 * w * x * hbar / d1 - 2.0 * w * x * hbar / d2


def _quesne_dwh(x, p, hbar):
    w, l = p["omega"], p["ell"]
    out = 0.0
    for s in (-1.0, 1.0):
        c = 2.0 * l + s * hbar
        d = w * x * x + c
        out = out - s * 2.0 * w * hbar * (c - w * x * x) / (d * d)
    return out


def _restricted_wh(x, p, hbar):
    P, Q, a = p["P"], p["Q"], p["a"]
    h2 = hbar * hbar
    return h2 * (2 * P * np.exp(x) + 2 * a * Q + Q * np.exp(-x)) / (np.exp(2 * x) + Q * h2)


def _restricted_dwh(x, p, hbar):
    P, Q, a = p["P"], p["Q"], p["a"]
    h2 = hbar * hbar
    num = 2 * P * np.exp(x) + 2 * a * Q + Q * np.exp(-x)
    dnum = 2 * P * np.exp(x) - Q * np.exp(-x)
    den = np.exp(2 * x) + Q * h2
    return h2 * (dnum * den - num * 2 * np.exp(2 * x)) / (den * den)


def _restricted_parts(x, p, hbar):
    # W = -a + (c e^x + d) / (e^{2x} + k); the e^{-x} terms cancel exactly
    h2 = hbar * hbar
    return 2.0 * p["P"] * h2 - 1.0, 2.0 * p["a"] * p["Q"] * h2, p["Q"] * h2


def _restricted_w(x, p, hbar):
    c, d, k = _restricted_parts(x, p, hbar)
    x = np.asarray(x, dtype=float)
    t = np.exp(np.minimum(x, 0.0))
    s = np.exp(-np.maximum(x, 0.0))
    left = (c * t + d) / (t * t + k)
    right = (c * s + d * s * s) / (1.0 + k * s * s)
    return -p["a"] + np.where(x <= 0, left, right)


def _restricted_dw(x, p, hbar):
    c, d, k = _restricted_parts(x, p, hbar)
    x = np.asarray(x, dtype=float)
    t = np.exp(np.minimum(x, 0.0))
    s = np.exp(-np.maximum(x, 0.0))
    left = t * (c * (t * t + k) - 2.0 * t * (c * t + d)) / (t * t + k) ** 2
    q = 1.0 + k * s * s
    right = -s * ((c + 2.0 * d * s) * q - 2.0 * k * s * (c * s + d * s * s)) / (q * q)
    return np.where(x <= 0, left, right)


QUESNE_EXTENDED = ExtendedSpec(
    name="quesne-extended",
    title="Rationally extended 3-D oscillator",
    kernel=OSCILLATOR_3D,
    param_schema=(Param("omega", _pos, "> 0"), Param("ell", _pos, "> 0")),
    domain=(0.0, _INF),
    a_param="ell",
    a_sign=1.0,
    kernel_params=lambda p: {"omega": p["omega"], "ell": p["ell"]},
    w_h=_quesne_wh,
    dw_h=_quesne_dwh,
    g=lambda a, p: 2.0 * p["omega"] * a,
    defaults={"omega": 1.0, "ell": 3.0},
    window=(0.05, 12.0),
)

MORSE_RESTRICTED_EXT = ExtendedSpec(
    name="morse-restricted-ext",
    title="Restricted rational extension of Morse",
    kernel=MORSE,
    param_schema=(Param("P", _real, "real"), Param("Q", _pos, "> 0"), Param("a", lambda v: _real(v) and v < 0, "< 0")),
    domain=(-_INF, _INF),
    a_param="a",
    a_sign=1.0,
    kernel_params=lambda p: {"A": -p["a"]},
    w_h=_restricted_wh,
    dw_h=_restricted_dwh,
    g=lambda a, p: -a * a,
    defaults={"P": 1.0, "Q": 1.0, "a": -10.0},
    window=(-2.5, 6.0),
    w_full=_restricted_w,
    dw_full=_restricted_dw,
)

CONVENTIONAL: dict[str, SuperpotentialSpec] = {
    s.name: s
    for s in (
        HARMONIC,
        MORSE,
        COULOMB,
        ROSEN_MORSE_TRIG,
        ROSEN_MORSE_HYP,
        ECKART,
        OSCILLATOR_3D,
        SCARF_TRIG,
        SCARF_HYP,
        POSCHL_TELLER,
    )
}
EXTENDED: dict[str, ExtendedSpec] = {s.name: s for s in (QUESNE_EXTENDED, MORSE_RESTRICTED_EXT)}
REGISTRY: dict = {**CONVENTIONAL, **EXTENDED}


def get(name: str):
    """Look up an entry by name."""
    try:
        return REGISTRY[name]
    except KeyError:
        raise ParamError(f"unknown potential {name!r}; known: {', '.join(REGISTRY)}") from None


def names(include_extended: bool = True) -> list[str]:
    return list(REGISTRY if include_extended else CONVENTIONAL)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def _scalarize(x_in, out):
    return float(out) if np.ndim(x_in) == 0 else out


def _check_hbar(hbar: float) -> float:
    hbar = float(hbar)
    if not (math.isfinite(hbar) and hbar > 0):
        raise ParamError("hbar must be a positive finite number")
    return hbar


def evaluate_W(spec, x, params: Params, hbar: float = 1.0):
    """W(x) for ``spec`` at validated ``params``."""
    p = spec.validate(params)
    hbar = _check_hbar(hbar)
    xs = spec.check_x(x)
    with np.errstate(over="ignore"):
        out = spec.W(xs, p, hbar)
    return _scalarize(x, np.asarray(out, dtype=float))


def evaluate_partner(spec, x, params: Params, hbar: float = 1.0, side: str = "minus"):
    """Partner potential ``W**2 -/+ hbar W'`` on the chosen ``side``."""
    side = str(side).lower()
    if side not in ("minus", "plus"):
        raise ParamError("side must be 'minus' or 'plus'")
    p = spec.validate(params)
    hbar = _check_hbar(hbar)
    xs = spec.check_x(x)
    sgn = -1.0 if side == "minus" else 1.0
    with np.errstate(over="ignore"):
        w = spec.W(xs, p, hbar)
        out = w * w + sgn * hbar * spec.dW(xs, p, hbar)
    return _scalarize(x, np.asarray(out, dtype=float))


def _edge_probe_points(domain: tuple[float, float], side: str, count: int) -> np.ndarray:
    lo, hi = domain
    k = np.arange(count, dtype=float)
    if side == "left":
        if math.isinf(lo):
            theta = -0.5 * math.pi + 0.1 * 2.0**-k
            return np.tan(theta)
        d0 = min(1.0, 0.1 * (hi - lo))
        return lo + d0 * 2.0**-k
    if math.isinf(hi):
        theta = 0.5 * math.pi - 0.1 * 2.0**-k
        return np.tan(theta)
    d0 = min(1.0, 0.1 * (hi - lo))
    return hi - d0 * 2.0**-k


def _edge_sign(spec, p: dict, hbar: float, side: str, max_probes: int = 40, stable: int = 3) -> tuple[int, float]:
    xs = _edge_probe_points(spec.domain, side, max_probes)
    with np.errstate(all="ignore"):
        vals = np.asarray(spec.W(xs, p, hbar), dtype=float)
    signs = [int(np.sign(v)) if not np.isnan(v) else 0 for v in vals]
    # the deepest probes decide; the trailing run must be long enough
    last = signs[-1]
    run = 0
    for s in reversed(signs):
        if s != last or s == 0:
            break
        run += 1
    if last != 0 and run >= stable:
        return last, float(xs[len(xs) - run])
    raise IndeterminateSign(f"{spec.name}: sign of W at the {side} edge did not stabilise in {max_probes} probes")


def classify_phase(spec, params: Params, hbar: float = 1.0) -> PhaseReport:
    """Classify the SUSY phase from the signs of W near both domain edges.

    ``(-, +)`` means the ground state ``exp(-int W / hbar)`` is normalisable
    for H_minus (unbroken). Equal signs mean no zero mode in either partner
    (broken). ``(+, -)`` means the zero mode belongs to H_plus instead; the
    report then says so and the phase is ``NoBoundStates`` for H_minus as
    labelled.
    """
    p = spec.validate(params)
    hbar = _check_hbar(hbar)
    sl, xl = _edge_sign(spec, p, hbar, "left")
    sr, xr = _edge_sign(spec, p, hbar, "right")
    if sl < 0 < sr:
        phase = Phase.UNBROKEN
        why = "W<0 at left edge and W>0 at right edge: exp(-int W/hbar) is normalisable"
    elif sl == sr:
        phase = Phase.BROKEN
        why = "W has the same sign at both edges: neither partner has a zero mode"
    else:
        phase = Phase.NO_BOUND_STATES
        why = "W>0 at left edge and W<0 at right edge: the zero mode belongs to H_plus; use W -> -W to relabel"
    evidence = f"{why} (sign probes settled at x={xl:.6g} and x={xr:.6g})"
    return PhaseReport(phase, sl, sr, evidence)


def _max_level(spec: SuperpotentialSpec, p: dict, hbar: float, phase: Phase) -> int | None:
    if phase is Phase.UNBROKEN:
        return spec.max_level_unbroken(p, hbar)
    if spec.max_level_broken is None:
        return -1
    return spec.max_level_broken(p, hbar)


def max_level(spec, params: Params, hbar: float = 1.0, phase: Phase | None = None) -> int | None:
    """Largest admissible level index (``None`` for an infinite spectrum)."""
    base = spec.kernel if getattr(spec, "extended", False) else spec
    p = spec.validate(params)
    if getattr(spec, "extended", False):
        p = spec.kernel_params(p)
    phase = base.phase_rule(p) if phase is None else Phase(phase)
    return _max_level(base, p, _check_hbar(hbar), phase)


def analytic_energy(spec, n: int, params: Params, hbar: float = 1.0, phase: Phase | str = Phase.UNBROKEN) -> float:
    """Closed-form level ``E_n`` in the requested phase.

    Raises:
        PhaseError: the parameters are not in ``phase``, or the entry has no
            closed form there.
        RangeError: ``n`` is negative or beyond the last bound state.
    """
    phase = Phase(phase)
    hbar = _check_hbar(hbar)
    p = spec.validate(params)
    if getattr(spec, "extended", False):
        if spec.name == "quesne-extended" and not 2.0 * p["ell"] > hbar:
            raise ParamError("quesne-extended needs 2*ell > hbar")
        return analytic_energy(spec.kernel, n, spec.kernel_params(p), hbar, phase)
    if int(n) != n or n < 0:
        raise RangeError(f"level index must be a non-negative integer, got {n!r}")
    n = int(n)
    actual = spec.phase_rule(p)
    if actual is not phase:
        raise PhaseError(f"{spec.name}: parameters {p} are in phase {actual.value}, not {phase.value}")
    if phase is Phase.BROKEN and spec.energy_broken is None:
        raise PhaseError(f"{spec.name}: no broken-phase closed form (class {spec.si_class.value})")
    if phase is Phase.NO_BOUND_STATES:
        raise PhaseError(f"{spec.name}: H_minus has no bound states for {p}")
    top = _max_level(spec, p, hbar, phase)
    if top is not None and n > top:
        raise RangeError(f"{spec.name}: n={n} exceeds the last bound state n={top}")
    fn = spec.energy_unbroken if phase is Phase.UNBROKEN else spec.energy_broken
    return float(fn(n, p, hbar))


def default_grid(spec, points: int = 401) -> np.ndarray:
    lo, hi = spec.window
    return np.linspace(lo, hi, points)


def shape_invariance_residual(spec, params: Params, hbar: float = 1.0, grid: Sequence[float] | None = None) -> float:
    """max |V_plus(x, a) + g(a) - V_minus(x, a + hbar) - g(a + hbar)| on ``grid``."""
    hbar = _check_hbar(hbar)
    p = spec.validate(params)
    a = spec.a_of(p)
    q = spec.validate(spec.with_a(p, a + hbar))
    xs = spec.check_x(default_grid(spec) if grid is None else grid)
    w0, w1 = spec.W(xs, p, hbar), spec.W(xs, q, hbar)
    vp = w0 * w0 + hbar * spec.dW(xs, p, hbar)
    vm = w1 * w1 - hbar * spec.dW(xs, q, hbar)
    res = vp + spec.g(a, p) - vm - spec.g(a + hbar, q)
    return float(np.max(np.abs(res)))


def shape_invariance_scale(spec, params: Params, hbar: float = 1.0, grid: Sequence[float] | None = None) -> float:
    """Magnitude the residual is measured against: ``max(1, |V_plus| + |g(a)|)`` on ``grid``."""
    p = spec.validate(params)
    xs = spec.check_x(default_grid(spec) if grid is None else grid)
    w = spec.W(xs, p, hbar)
    vp = np.abs(w * w + hbar * spec.dW(xs, p, hbar))
    return float(max(1.0, float(np.max(vp)) + abs(spec.g(spec.a_of(p), p))))


def pde_constraint_residuals(
    spec,
    params: Params,
    grid: Sequence[float] | None = None,
    step: float | None = None,
    analytic: bool = True,
) -> tuple[float, float]:
    """Residuals of the two hbar-independent shape-invariance constraints.

    ``r1`` is max |W dW/da - dW/dx + (dg/da) / 2| and ``r2`` is
    max |d^3 W / da^2 dx| over ``grid``.
    With ``analytic=True`` the first derivatives are exact and only ``r2`` uses
    a central difference in ``a``. With ``analytic=False`` every derivative is
    a central difference of step ``step`` so the O(step**2) convergence can be
    observed.
    """
    if getattr(spec, "extended", False):
        raise NotApplicable(f"{spec.name}: extended superpotentials depend on hbar explicitly")
    p = spec.validate(params)
    xs = spec.check_x(default_grid(spec) if grid is None else grid)
    a = spec.a_of(p)
    ha = (1e-3 if step is None else step) * (1.0 + abs(a))

    def W(x, av):
        return spec.w(x, spec.with_a(p, av))

    def Wx(x, av):
        return spec.dw(x, spec.with_a(p, av))

    w = W(xs, a)
    if analytic:
        wa = spec.f1(xs, p) + spec.du(a, p)
        wx = spec.dw(xs, p)
        ga = spec.dg(a, p)
    else:
        h = 1e-3 if step is None else step
        wa = (W(xs, a + h) - W(xs, a - h)) / (2 * h)
        wx = (W(xs + h, a) - W(xs - h, a)) / (2 * h)
        ga = (spec.g(a + h, p) - spec.g(a - h, p)) / (2 * h)
    r1 = float(np.max(np.abs(w * wa - wx + 0.5 * ga)))
    # dW/dx is linear in a, so the second difference vanishes up to rounding
    wxx = (Wx(xs, a + ha) - 2.0 * Wx(xs, a) + Wx(xs, a - ha)) / (ha * ha)
    r2 = float(np.max(np.abs(wxx)))
    return r1, r2


def ground_state_wavefunction(spec, params: Params, hbar: float = 1.0, x=0.0, x0: float = 0.0):
    """Unnormalised zero mode ``exp(-(1/hbar) int_{x0}^{x} W dt)``.

    Only defined in the unbroken phase. ``x`` may be a scalar or an array; the
    normalisation constant and the reference point ``x0`` are left to the caller.
    """
    hbar = _check_hbar(hbar)
    p = spec.validate(params)
    rep = classify_phase(spec, p, hbar)
    if rep.phase is not Phase.UNBROKEN:
        raise PhaseError(f"{spec.name}: no normalisable zero mode in phase {rep.phase.value}")
    spec.check_x(x0)
    xs = spec.check_x(x)

    def _one(xv: float) -> float:
        val, _ = integrate.quad(lambda t: float(spec.W(t, p, hbar)), x0, xv, epsabs=1e-13, epsrel=1e-12, limit=400)
        return math.exp(-val / hbar)

    out = np.array([_one(float(v)) for v in np.ravel(xs)]).reshape(np.shape(xs))
    return _scalarize(x, out)


def restricted_extension_maps_to_scarf(
    P: float, Q: float, a: float, hbar: float = 1.0, grid: Sequence[float] | None = None
) -> float:
    """max |W_ext(x) - W_scarf(x - beta)| for the restricted Morse extension.

    With ``exp(2 beta) = Q hbar**2`` the extension is a shifted Scarf II with
    ``A = -a`` and ``B = (2 P hbar**2 - 1) exp(-beta) / 2``.
    """
    hbar = _check_hbar(hbar)
    pe = MORSE_RESTRICTED_EXT.validate({"P": P, "Q": Q, "a": a})
    beta = 0.5 * math.log(Q * hbar * hbar)
    ps = SCARF_HYP.validate({"A": -a, "B": 0.5 * (2.0 * P * hbar * hbar - 1.0) * math.exp(-beta)})
    xs = np.linspace(-8.0, 8.0, 801) if grid is None else np.asarray(grid, dtype=float)
    we = MORSE_RESTRICTED_EXT.W(xs, pe, hbar)
    ws = SCARF_HYP.W(xs - beta, ps, hbar)
    return float(np.max(np.abs(we - ws)))
