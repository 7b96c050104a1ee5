import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sipwkb import catalog
from sipwkb.catalog import Phase
from sipwkb.errors import DomainError, IndeterminateSign, NotApplicable, ParamError, PhaseError, RangeError

CONVENTIONAL = catalog.names(include_extended=False)
ALL = catalog.names()


def test_registry_names():
    assert ALL == [
        "harmonic", "morse", "coulomb", "rosen-morse-trig", "rosen-morse-hyp", "eckart",
        "3d-oscillator", "scarf-trig", "scarf-hyp", "poschl-teller",
        "quesne-extended", "morse-restricted-ext",
    ]
    with pytest.raises(ParamError):
        catalog.get("nope")


@pytest.mark.parametrize(
    "name, params, x, expected",
    [
        ("3d-oscillator", {"omega": 1, "ell": 3}, 1.0, -2.5),
        ("morse", {"A": 5}, 0.0, 4.0),
        ("harmonic", {"omega": 2}, 0.0, 0.0),
    ],
)
def test_evaluate_W(name, params, x, expected):
    assert catalog.evaluate_W(catalog.get(name), x, params) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "name, params, x, side, expected",
    [
        ("harmonic", {"omega": 1}, 0.0, "minus", -0.5),
        ("3d-oscillator", {"omega": 1, "ell": 3}, 1.0, "minus", 2.75),
        ("3d-oscillator", {"omega": 1, "ell": 3}, 1.0, "Plus", 6.25 + 3.5),
    ],
)
def test_evaluate_partner(name, params, x, side, expected):
    assert catalog.evaluate_partner(catalog.get(name), x, params, 1.0, side) == pytest.approx(expected, abs=1e-14)


def test_domain_and_param_errors():
    osc = catalog.get("3d-oscillator")
    with pytest.raises(DomainError):
        catalog.evaluate_W(osc, 0.0, osc.defaults)
    with pytest.raises(DomainError):
        catalog.evaluate_W(catalog.get("scarf-trig"), math.pi / 2, {"A": 3, "B": 1})
    with pytest.raises(ParamError):
        catalog.evaluate_W(osc, 1.0, {"omega": -1, "ell": 3})
    with pytest.raises(ParamError):
        catalog.evaluate_W(osc, 1.0, {"omega": 1})


@pytest.mark.parametrize("name", ALL)
def test_partner_identity(name):
    spec = catalog.get(name)
    x = catalog.default_grid(spec, 101)
    vp = catalog.evaluate_partner(spec, x, spec.defaults, 0.7, "plus")
    vm = catalog.evaluate_partner(spec, x, spec.defaults, 0.7, "minus")
    dw = spec.dW(x, spec.defaults, 0.7)
    scale = np.maximum(1.0, np.abs(vp) + np.abs(vm))
    assert np.max(np.abs(vp - vm - 1.4 * dw) / scale) <= 1e-10


@pytest.mark.parametrize("name", ALL)
def test_derivative_matches_finite_difference(name):
    spec = catalog.get(name)
    x = catalog.default_grid(spec, 41)
    h = 1e-6 * (1 + np.abs(x))
    fd = (spec.W(x + h, spec.defaults) - spec.W(x - h, spec.defaults)) / (2 * h)
    assert np.allclose(fd, spec.dW(x, spec.defaults), rtol=1e-6, atol=1e-6)


@pytest.mark.parametrize("name", CONVENTIONAL)
def test_w_decomposition(name):
    spec = catalog.get(name)
    for p in spec.samples:
        p = spec.validate(p)
        a = spec.a_of(p)
        x = catalog.default_grid(spec, 200)
        lhs = spec.W(x, p)
        rhs = a * spec.f1(x, p) + spec.f2(x, p) + spec.u(a, p)
        assert np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))) <= 1e-12


@pytest.mark.parametrize(
    "name, params, phase",
    [
        ("3d-oscillator", {"omega": 1, "ell": 3}, Phase.UNBROKEN),
        ("3d-oscillator", {"omega": 1, "ell": -3}, Phase.BROKEN),
        ("harmonic", {"omega": 0.3}, Phase.UNBROKEN),
        ("harmonic", {"omega": 30}, Phase.UNBROKEN),
        ("morse", {"A": 5}, Phase.UNBROKEN),
        ("morse", {"A": -5}, Phase.BROKEN),
        ("coulomb", {"e2": 2, "ell": 1}, Phase.UNBROKEN),
        ("coulomb", {"e2": 2, "ell": -1}, Phase.NO_BOUND_STATES),
        ("eckart", {"A": 1, "B": 100}, Phase.UNBROKEN),
        ("scarf-trig", {"A": 3, "B": 1}, Phase.UNBROKEN),
        ("scarf-trig", {"A": 1, "B": 3}, Phase.BROKEN),
        ("poschl-teller", {"A": 10, "B": 12}, Phase.UNBROKEN),
        ("poschl-teller", {"A": 20, "B": 10}, Phase.BROKEN),
    ],
)
def test_classify_phase(name, params, phase):
    rep = catalog.classify_phase(catalog.get(name), params)
    assert rep.phase is phase
    assert rep.phase is catalog.get(name).phase_rule(catalog.get(name).validate(params))
    if phase is Phase.UNBROKEN:
        assert (rep.sign_left, rep.sign_right) == (-1, 1)
    if phase is Phase.BROKEN:
        assert rep.sign_left == rep.sign_right


def test_indeterminate_sign_raised_when_w_vanishes_at_edge():
    from dataclasses import replace

    flat = replace(catalog.get("harmonic"), w=lambda x, p: 0.0 * x, dw=lambda x, p: 0.0 * x)
    with pytest.raises(IndeterminateSign):
        catalog.classify_phase(flat, {"omega": 1.0})


@pytest.mark.parametrize(
    "name, params, n, phase, expected",
    [
        ("3d-oscillator", {"omega": 1, "ell": 3}, 2, Phase.UNBROKEN, 4.0),
        ("3d-oscillator", {"omega": 1, "ell": -3}, 0, Phase.BROKEN, 7.0),
        ("coulomb", {"e2": 2, "ell": 1}, 1, Phase.UNBROKEN, 0.75),
        ("morse", {"A": 5}, 0, Phase.UNBROKEN, 0.0),
        ("morse", {"A": 5}, 1, Phase.UNBROKEN, 9.0),
    ],
)
def test_analytic_energy(name, params, n, phase, expected):
    assert catalog.analytic_energy(catalog.get(name), n, params, 1.0, phase) == pytest.approx(expected, abs=1e-12)


def test_broken_closed_forms():
    # 3-D oscillator: (2n+1) hbar omega - 2 ell omega; Scarf-trig: (B + (n+1/2) hbar)^2 - A^2;
    # Poschl-Teller: A^2 - (|B| - (n+1/2) hbar)^2
    osc = catalog.get("3d-oscillator")
    scarf = catalog.get("scarf-trig")
    pt = catalog.get("poschl-teller")
    for n in range(6):
        assert catalog.analytic_energy(osc, n, {"omega": 1, "ell": -3}, 1, "Broken") == pytest.approx(2 * n + 7)
        assert catalog.analytic_energy(scarf, n, {"A": 1, "B": 3}, 1, "Broken") == pytest.approx((3 + n + 0.5) ** 2 - 1)
        assert catalog.analytic_energy(pt, n, {"A": 20, "B": 10}, 1, "Broken") == pytest.approx(400 - (10 - n - 0.5) ** 2)


def test_energy_errors():
    with pytest.raises(RangeError):
        catalog.analytic_energy(catalog.get("morse"), 5, {"A": 5})
    with pytest.raises(RangeError):
        catalog.analytic_energy(catalog.get("morse"), -1, {"A": 5})
    with pytest.raises(PhaseError):
        catalog.analytic_energy(catalog.get("harmonic"), 0, {"omega": 1}, 1, "Broken")
    with pytest.raises(PhaseError):
        catalog.analytic_energy(catalog.get("morse"), 0, {"A": -5}, 1, "Broken")
    with pytest.raises(PhaseError):
        catalog.analytic_energy(catalog.get("3d-oscillator"), 0, {"omega": 1, "ell": -3}, 1, "Unbroken")


def test_eckart_reference_point_has_only_a_ground_state():
    eck = catalog.get("eckart")
    assert catalog.max_level(eck, {"A": 3, "B": 12}) == 0
    with pytest.raises(RangeError):
        catalog.analytic_energy(eck, 1, {"A": 3, "B": 12})


@pytest.mark.parametrize("name", CONVENTIONAL)
def test_unbroken_ground_state_and_monotone(name):
    spec = catalog.get(name)
    for p in spec.samples:
        top = catalog.max_level(spec, p)
        levels = [catalog.analytic_energy(spec, n, p) for n in range(min(10, top + 1) if top is not None else 10)]
        assert levels[0] == 0.0
        assert all(b > a for a, b in zip(levels, levels[1:]))


@pytest.mark.parametrize("name", ALL)
def test_shape_invariance_residual(name):
    spec = catalog.get(name)
    for p in (spec.defaults, *getattr(spec, "samples", ())):
        grid = np.linspace(*spec.window, 200)
        res = catalog.shape_invariance_residual(spec, p, 1.0, grid)
        assert res <= 1e-9 * catalog.shape_invariance_scale(spec, p, 1.0, grid)


@pytest.mark.parametrize(
    "name, params",
    [
        ("quesne-extended", {"omega": 1, "ell": 3}),
        ("morse-restricted-ext", {"P": 1, "Q": 1, "a": -5}),
    ],
)
def test_shape_invariance_extended_examples(name, params):
    spec = catalog.get(name)
    res = catalog.shape_invariance_residual(spec, params, 1.0, np.linspace(*spec.window, 200))
    assert res <= 1e-9 * max(1.0, abs(spec.g(spec.a_of(params) + 1.0, params)))


def test_shape_invariance_rejects_invalid_shift():
    # a + hbar crosses ell = 0, outside the schema
    with pytest.raises(ParamError):
        catalog.shape_invariance_residual(catalog.get("coulomb"), {"e2": 2, "ell": -1}, 1.0)


@given(
    omega=st.floats(0.2, 5.0),
    ell=st.floats(0.3, 6.0),
    hbar=st.floats(0.2, 2.0),
)
@settings(max_examples=40, deadline=None)
def test_shape_invariance_oscillator_property(omega, ell, hbar):
    spec = catalog.get("3d-oscillator")
    p = {"omega": omega, "ell": ell}
    assert catalog.shape_invariance_residual(spec, p, hbar) <= 1e-9 * catalog.shape_invariance_scale(spec, p, hbar)


@given(A=st.floats(2.0, 20.0), B=st.floats(-10.0, 10.0), hbar=st.floats(0.25, 1.5))
@settings(max_examples=40, deadline=None)
def test_shape_invariance_scarf_hyp_property(A, B, hbar):
    spec = catalog.get("scarf-hyp")
    p = {"A": A, "B": B}
    assert catalog.shape_invariance_residual(spec, p, hbar) <= 1e-9 * catalog.shape_invariance_scale(spec, p, hbar)


def test_extension_vanishes_with_hbar():
    q = catalog.get("quesne-extended")
    x = np.linspace(0.5, 6, 50)
    small = [np.max(np.abs(q.w_h(x, q.defaults, h))) for h in (1e-2, 1e-4, 1e-6)]
    assert small[0] > small[1] > small[2]
    assert small[2] < 1e-5


def test_harmonic_r2_is_exactly_zero():
    r1, r2 = catalog.pde_constraint_residuals(catalog.get("harmonic"), {"omega": 1})
    assert r2 == 0.0
    assert r1 <= 1e-12


@pytest.mark.parametrize("name", CONVENTIONAL)
def test_pde_residuals_converge(name):
    spec = catalog.get(name)
    r1 = [catalog.pde_constraint_residuals(spec, spec.defaults, step=h, analytic=False)[0] for h in (2.5e-3, 1.25e-3, 6.25e-4)]
    if r1[0] > 1e-9:
        # O(h^2): each halving removes about a factor 4
        assert r1[0] / r1[1] == pytest.approx(4, rel=0.2)
        assert r1[1] / r1[2] == pytest.approx(4, rel=0.2)
    r1a, r2a = catalog.pde_constraint_residuals(spec, spec.defaults)
    assert r1a <= 1e-8 * catalog.shape_invariance_scale(spec, spec.defaults)
    assert r2a <= 1e-4 * catalog.shape_invariance_scale(spec, spec.defaults)


@pytest.mark.parametrize(
    "name, params, r1_tol, r2_tol",
    [("eckart", {"A": 3, "B": 12}, 1e-6, 1e-5), ("scarf-trig", {"A": 4, "B": 1}, 1e-6, None)],
)
def test_pde_residual_examples(name, params, r1_tol, r2_tol):
    r1, r2 = catalog.pde_constraint_residuals(catalog.get(name), params)
    assert r1 <= r1_tol
    if r2_tol is not None:
        assert r2 <= r2_tol


def test_pde_residuals_not_applicable_to_extensions():
    with pytest.raises(NotApplicable):
        catalog.pde_constraint_residuals(catalog.get("quesne-extended"), {"omega": 1, "ell": 3})


def test_ground_state_wavefunction_examples():
    h = catalog.get("harmonic")
    assert catalog.ground_state_wavefunction(h, {"omega": 1}, 1.0, 2.0, 0.0) == pytest.approx(math.exp(-1), rel=1e-12)
    osc = catalog.get("3d-oscillator")
    # exp(-int_1^r (t/2 - 3/t) dt) = r^3 exp(-(r^2 - 1)/4)
    for r in (0.5, 2.0, 4.0):
        val = catalog.ground_state_wavefunction(osc, {"omega": 1, "ell": 3}, 1.0, r, 1.0)
        assert val == pytest.approx(r**3 * math.exp(-(r * r - 1) / 4), rel=1e-10)
    m = catalog.get("morse")
    psi = catalog.ground_state_wavefunction(m, {"A": 5}, 1.0, np.linspace(-2.5, 8, 500), 0.0)
    assert np.all(psi > 0)
    with pytest.raises(PhaseError):
        catalog.ground_state_wavefunction(osc, {"omega": 1, "ell": -3}, 1.0, 1.0, 1.0)


def test_ground_state_is_square_integrable():
    m = catalog.get("morse")
    x = np.linspace(-4, 40, 8001)
    psi2 = catalog.ground_state_wavefunction(m, {"A": 5}, 1.0, x, 0.0) ** 2
    total = np.trapezoid(psi2, x) if hasattr(np, "trapezoid") else np.trapz(psi2, x)
    tail = psi2[x > 25]
    assert tail.max() * 15 < 1e-10 * total


@pytest.mark.parametrize("P, Q, a", [(1, 1, -5), (3, 4, -2)])
def test_restricted_extension_maps_to_scarf(P, Q, a):
    grid = np.linspace(-6, 6, 301)
    assert catalog.restricted_extension_maps_to_scarf(P, Q, a, 1.0, grid) <= 1e-10


def test_restricted_extension_degenerate_q():
    with pytest.raises(ParamError):
        catalog.restricted_extension_maps_to_scarf(1, 0.0, -5, 1.0, np.linspace(-1, 1, 5))
