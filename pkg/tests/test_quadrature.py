import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sipwkb import catalog, quadrature
from sipwkb.errors import DomainError, MoreThanTwoRoots, NegativeIntegrand, NoTurningPoints
from sipwkb.quadrature import TurningPair, action, action_integral, closed_form, closed_form_quadrature, find_turning_points


def _check_pair(F, pair, E):
    assert pair.x_L < pair.x_R
    for x in (pair.x_L, pair.x_R):
        assert abs(float(F(np.array([x]))[0]) - E) <= 1e-12 * (1 + abs(E))
    inner = np.linspace(pair.x_L, pair.x_R, 50)[1:-1]
    assert np.all(E - F(inner) > 0)


def test_turning_points_linear():
    F = lambda x: x * x  # noqa: E731
    pair = find_turning_points(F, (-math.inf, math.inf), 4.0)
    assert pair.x_L == pytest.approx(-2, abs=1e-13)
    assert pair.x_R == pytest.approx(2, abs=1e-13)
    _check_pair(F, pair, 4.0)


def test_turning_points_morse():
    spec = catalog.get("morse")
    F = lambda x: spec.W(x, {"A": 5}) ** 2  # noqa: E731
    pair = find_turning_points(F, spec.domain, 9.0)
    assert pair.x_L == pytest.approx(-math.log(8), rel=1e-13)
    assert pair.x_R == pytest.approx(-math.log(2), rel=1e-13)
    _check_pair(F, pair, 9.0)


def test_turning_points_broken_oscillator():
    # r/2 + 3/r = sqrt(7) gives r**2 - 2 sqrt(7) r + 6 = 0
    spec = catalog.get("3d-oscillator")
    F = lambda r: spec.W(r, {"omega": 1, "ell": -3}) ** 2  # noqa: E731
    pair = find_turning_points(F, spec.domain, 7.0)
    assert pair.x_L == pytest.approx(math.sqrt(7) - 1, rel=1e-13)
    assert pair.x_R == pytest.approx(math.sqrt(7) + 1, rel=1e-13)
    _check_pair(F, pair, 7.0)


def test_turning_point_errors():
    with pytest.raises(NoTurningPoints) as exc:
        find_turning_points(lambda x: x * x + 1.0, (-math.inf, math.inf), 0.5)
    assert exc.value.count == 0
    # monotonic W**2: broken Morse has a single root
    spec = catalog.get("morse")
    with pytest.raises(NoTurningPoints) as exc:
        find_turning_points(lambda x: spec.W(x, {"A": -5}) ** 2, spec.domain, 30.0)
    assert exc.value.count == 1
    with pytest.raises(MoreThanTwoRoots) as exc:
        find_turning_points(lambda x: (x * x - 4.0) ** 2, (-math.inf, math.inf), 1.0)
    assert exc.value.count == 4


@pytest.mark.parametrize(
    "F, E, domain, expected",
    [
        (lambda x: x * x, 1.0, (-math.inf, math.inf), math.pi / 2),
        (lambda x: x * x, 4.0, (-math.inf, math.inf), 2 * math.pi),
    ],
)
def test_action_integral_examples(F, E, domain, expected):
    res, _ = action(F, domain, E)
    assert res.value == pytest.approx(expected, abs=1e-12)
    assert res.estimated_error <= 1e-10
    assert res.value >= 0


def test_action_integral_on_pair():
    pair = TurningPair(-1.0, 1.0, 0.0, (0.0, 0.0))
    res = action_integral(lambda x: 1.0 - x * x, pair)
    assert res.value == pytest.approx(math.pi / 2, abs=1e-13)
    assert res.node_count_used > 0


def test_negative_integrand():
    pair = TurningPair(-1.0, 1.0, 0.0, (0.0, 0.0))
    with pytest.raises(NegativeIntegrand):
        action_integral(lambda x: x * x - 0.5, pair)


@pytest.mark.parametrize("c", [2.0, 10.0])
def test_affine_invariance(c):
    base = TurningPair(-1.0, 2.0, 0.0, (0.0, 0.0))
    G = lambda x: (2.0 - x) * (x + 1.0) * (3.0 + np.sin(x))  # noqa: E731
    scaled = TurningPair(c * base.x_L, c * base.x_R, 0.0, (0.0, 0.0))
    a = action_integral(G, base, 1e-12).value
    b = action_integral(lambda y: G(y / c), scaled, 1e-12).value
    assert b == pytest.approx(c * a, rel=1e-11)


@pytest.mark.parametrize(
    "name, y1, y2, expected",
    [
        ("I0", -1.0, 1.0, math.pi / 2),
        ("I4", -0.5, 0.5, math.pi * (1 - math.sqrt(3) / 2)),
        ("I1a", 1.0, 4.0, math.pi / 2),
    ],
)
def test_closed_form_examples(name, y1, y2, expected):
    assert closed_form(name, y1, y2) == pytest.approx(expected, abs=1e-14)
    assert closed_form_quadrature(name, y1, y2).value == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize(
    "name, y1, y2",
    [("I1a", -1.0, 2.0), ("I4", -2.0, 0.5), ("I0", 1.0, 1.0), ("I2a", 1.0, 2.0), ("I5a", 0.5, 3.0), ("I9", 0.0, 1.0)],
)
def test_closed_form_domain_errors(name, y1, y2):
    with pytest.raises(DomainError):
        closed_form(name, y1, y2)


@pytest.mark.parametrize("name", list(quadrature.CLOSED_FORMS))
def test_closed_forms_against_quadrature(name):
    rng = np.random.default_rng(20240611 + len(name))
    for y1, y2 in quadrature.random_arguments(name, rng, 100):
        exact = closed_form(name, y1, y2)
        numeric = closed_form_quadrature(name, y1, y2).value
        assert abs(exact - numeric) <= 1e-10 * (1 + abs(exact)), (y1, y2)


@given(st.floats(-20, 20), st.floats(0.01, 20))
@settings(max_examples=60, deadline=None)
def test_i0_property(y1, width):
    y2 = y1 + width
    assert closed_form("I0", y1, y2) == pytest.approx(closed_form_quadrature("I0", y1, y2).value, rel=1e-10, abs=1e-12)


def test_closed_forms_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    cases = {"I3": (-0.7, 2.5), "I2b": (0.3, 4.0), "I5b": (-6.0, -1.5)}
    for name, (y1, y2) in cases.items():
        _, w = quadrature.CLOSED_FORMS[name]
        f = lambda y: float(w(np.array([float(y)]))[0]) * mpmath.sqrt((y2 - y) * (y - y1))  # noqa: E731
        ref = mpmath.quad(f, [y1, y2])
        assert closed_form(name, y1, y2) == pytest.approx(float(ref), rel=1e-12)
