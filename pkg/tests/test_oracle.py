import math

import numpy as np
import pytest

from sipwkb import catalog, oracle
from sipwkb.catalog import Phase
from sipwkb.errors import InsufficientBoundStates, ParamError
from sipwkb.oracle import BoundaryKind, GridPotential, compare_spectra, solve_bound_states


def test_particle_in_a_box():
    pot = GridPotential.sample(lambda x: 0.0 * x, 0.0, math.pi, 4001)
    levels = solve_bound_states(pot, 1.0, 3)
    assert levels == pytest.approx([1.0, 4.0, 9.0], abs=1e-7)
    half = solve_bound_states(pot, 0.5, 3)
    assert half == pytest.approx([0.25, 1.0, 2.25], abs=1e-7)


def test_harmonic_partner_grid():
    pot = GridPotential.sample(lambda x: x * x / 4 - 0.5, -14.0, 14.0, 4001)
    assert solve_bound_states(pot, 1.0, 4) == pytest.approx([0, 1, 2, 3], abs=1e-7)


def test_grid_invariants():
    with pytest.raises(ParamError):
        GridPotential.sample(lambda x: x, 0, 1, 100)
    with pytest.raises(ParamError):
        GridPotential(np.linspace(0, 1, 2001), np.full(2001, np.nan), BoundaryKind.HARD_WALL, BoundaryKind.HARD_WALL)
    pot = GridPotential.sample(lambda x: x, 0, 1)
    assert pot.N >= oracle.MIN_POINTS
    assert pot.refined().h == pytest.approx(pot.h / 2)


def test_insufficient_bound_states():
    # -sech(x)**2 holds a single level at -(sqrt(5) - 1)**2 / 4
    tail = BoundaryKind.DECAYING_TAIL
    pot = GridPotential.sample(lambda x: -1.0 / np.cosh(x) ** 2, -30, 30, 4001, tail, tail)
    assert solve_bound_states(pot, 1.0, 1)[0] == pytest.approx(-((math.sqrt(5) - 1) ** 2) / 4, abs=1e-6)
    with pytest.raises(InsufficientBoundStates):
        solve_bound_states(pot, 1.0, 3)


@pytest.mark.parametrize(
    "name, params, count, tol",
    [
        ("morse", {"A": 5}, 4, 1e-6),
        ("harmonic", {"omega": 1}, 4, 1e-8),
        ("coulomb", {"e2": 2, "ell": 1}, 3, 1e-6),
        ("scarf-trig", {"A": 3, "B": 1}, 4, 1e-6),
    ],
)
def test_compare_spectra_examples(name, params, count, tol):
    cmp = compare_spectra(catalog.get(name), params, 1.0, count, tol)
    assert cmp.passed, cmp.rel_err
    assert len(cmp.numeric) == count
    if name == "harmonic":
        assert abs(cmp.numeric[0]) <= 1e-8


def test_broken_oscillator_both_partners():
    spec = catalog.get("3d-oscillator")
    for side in ("minus", "plus"):
        cmp = compare_spectra(spec, {"omega": 1, "ell": -3}, 1.0, 3, 1e-6, Phase.BROKEN, side)
        assert cmp.numeric == pytest.approx([7, 9, 11], rel=1e-6)


def test_extended_isospectral_with_kernel():
    cmp = compare_spectra(catalog.get("quesne-extended"), {"omega": 1, "ell": 3}, 1.0, 4, 1e-6)
    assert cmp.passed
    assert max(cmp.kernel_rel_err) <= 1e-6
    assert cmp.kernel_analytic == cmp.analytic


@pytest.mark.parametrize("name", ["morse", "3d-oscillator", "scarf-hyp"])
def test_node_theorem(name):
    spec = catalog.get(name)
    levels, size = oracle.oracle_levels(spec, spec.defaults, 1.0, 5)
    pot = oracle.build_grid(spec, spec.defaults, 1.0, "minus", levels[-1] + 1.0, size)
    for n, E in enumerate(levels):
        assert oracle.count_sign_changes(oracle.eigenfunction(pot, 1.0, E)) == n


def test_grid_convergence():
    spec = catalog.get("scarf-trig")
    p = spec.defaults
    levels, size = oracle.oracle_levels(spec, p, 1.0, 3)
    pot = oracle.build_grid(spec, p, 1.0, "minus", levels[-1] + 1.0, size)
    coarse = solve_bound_states(pot, 1.0, 3, richardson_tol=1.0)
    fine = solve_bound_states(pot.refined(), 1.0, 3, richardson_tol=1.0)
    assert max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(coarse, fine)) <= 1e-7


def test_oracle_is_blind_to_w():
    # the grid carries V values only; re-sampling the same V from a plain lambda gives the same levels
    spec = catalog.get("morse")
    pot = oracle.build_grid(spec, {"A": 5}, 1.0, "minus", 10.0, 8001)
    V = lambda x: (5 - np.exp(-x)) ** 2 - np.exp(-x)  # noqa: E731
    plain = GridPotential.sample(V, pot.x[0], pot.x[-1], pot.N)
    assert solve_bound_states(plain, 1.0, 3) == pytest.approx(solve_bound_states(pot, 1.0, 3), abs=1e-9)
    assert solve_bound_states(plain, 1.0, 3) == pytest.approx([0, 9, 16], abs=1e-6)


def test_half_line_grid_is_logarithmic():
    pot = oracle.build_grid(catalog.get("coulomb"), {"e2": 2, "ell": 1}, 1.0, "minus", 0.0)
    assert pot.origin == 0.0
    assert pot.left is BoundaryKind.CENTRIFUGAL_REGULARIZED
    assert pot.right is BoundaryKind.DECAYING_TAIL
    assert pot.x[0] == pytest.approx(oracle.LOG_R_MIN)
    assert np.allclose(np.diff(np.log(pot.x)), pot.h)
