import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sipwkb import extended
from sipwkb.errors import DomainError, MoreThanTwoRoots, ParamError, PoleError
from sipwkb.extended import eta, extended_swkb, extended_swkb_deviation


def test_eta_value():
    # z = sqrt(6), lambda = 3: z/2 - 3/z = 0 and the rational terms give 2z/11 - 2z/13
    z = math.sqrt(6)
    bracket = 2 * z / 11 - 2 * z / 13
    assert eta(z, 3, 1) == pytest.approx(2 - bracket**2, rel=1e-15)
    assert eta(z, 3, 1) == pytest.approx(1.9953053939067926, rel=1e-15)


def test_eta_errors():
    with pytest.raises(DomainError):
        eta(0.0, 3, 1)
    with pytest.raises(DomainError):
        eta(np.array([1.0, -1.0]), 3, 1)
    # 2 lambda - 1 = 0 puts a pole at the origin
    with pytest.raises(PoleError):
        eta(1e-12, 0.5, 1)
    # 2 lambda + 1 = 0 puts it at z = 0 too; lambda = -1 gives z**2 = 3
    with pytest.raises(PoleError):
        eta(math.sqrt(3.0), -1.0, 1)


def test_parameter_checks():
    with pytest.raises(ParamError):
        extended_swkb(0.5, 1)
    with pytest.raises(ParamError):
        extended_swkb(3, 0)
    with pytest.raises(ParamError):
        extended_swkb(3, 1.5)


def test_deviation_at_lambda_three():
    val, dev = extended_swkb_deviation(3, 1)
    assert dev == pytest.approx(-5.93216417538e-4, rel=1e-8)
    assert val == pytest.approx(1 + dev, abs=1e-15)
    assert abs(dev) > 1e-6


@pytest.mark.parametrize("lam", [0.75, 3.0, 20.0])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_kernel_deviation_vanishes(lam, n):
    assert abs(extended_swkb_deviation(lam, n, kernel_only=True)[1]) <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_large_lambda_limit(n):
    assert abs(extended_swkb_deviation(1e6, n)[1]) <= 1e-4


def test_deviation_is_continuous_in_lambda():
    lams = np.geomspace(0.75, 50, 20)
    devs = np.array([extended_swkb_deviation(lam, 1)[1] for lam in lams])
    assert np.all(np.isfinite(devs))
    assert np.all(devs < 0)
    assert np.max(np.abs(np.diff(devs))) < 0.05
    # the magnitude falls off as lambda grows
    assert np.all(np.diff(np.abs(devs)) < 0)


def test_second_well_just_above_one_half():
    with pytest.raises(MoreThanTwoRoots) as exc:
        extended.turning_points(0.51, 1)
    assert exc.value.count == 4


@pytest.mark.parametrize("hbar", [0.5, 2.0])
def test_hbar_factorisation(hbar):
    # I depends on hbar only through hbar * f(lambda)
    base = extended.dimensional_integral(3.0, 2, 1.0)
    scaled = extended.dimensional_integral(3.0, 2, hbar)
    assert scaled / hbar == pytest.approx(base, rel=1e-9)
    assert base / math.pi == pytest.approx(extended_swkb_deviation(3.0, 2)[0], rel=1e-9)


@given(lam=st.floats(0.8, 40.0), n=st.integers(1, 4))
@settings(max_examples=25, deadline=None)
def test_turning_points_are_roots(lam, n):
    r = extended_swkb(lam, n)
    assert r.z1 < r.z2
    for z in (r.z1, r.z2):
        assert abs(eta(z, lam, n)) <= 1e-9 * (1 + 2 * n)
    assert eta(0.5 * (r.z1 + r.z2), lam, n) > 0


def test_fixture_matches_recomputation():
    rows = extended.load_fixture()
    assert len(rows) == len(extended.FIXTURE_LAMBDAS) * len(extended.FIXTURE_LEVELS)
    for row in rows:
        val, dev = extended_swkb_deviation(row["lambda"], row["n"], tol=extended.FIXTURE_TOL)
        assert val == pytest.approx(row["integral_over_pi"], abs=1e-11)
        assert dev == pytest.approx(row["deviation"], abs=1e-11)


def test_fixture_round_trip(tmp_path):
    rows = extended.deviation_table([3.0], [1, 2])
    path = extended.write_fixture(tmp_path / "t.csv", rows)
    back = extended.load_fixture(path)
    assert [r["n"] for r in back] == [1, 2]
    assert back[0]["deviation"] == pytest.approx(rows[0]["deviation"], rel=1e-11)


@pytest.mark.parametrize("lam, n", [(0.75, 1), (3.0, 1), (3.0, 4), (20.0, 2)])
def test_against_mpmath(lam, n):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    lam_m = mpmath.mpf(lam)

    def b(z):
        return z / 2 - lam_m / z + 2 * z / (z * z + 2 * lam_m - 1) - 2 * z / (z * z + 2 * lam_m + 1)

    def f(z):
        return 2 * n - b(z) ** 2

    r = extended_swkb(lam, n)
    z1 = mpmath.findroot(f, mpmath.mpf(r.z1))
    z2 = mpmath.findroot(f, mpmath.mpf(r.z2))
    # the sine substitution removes the square-root endpoints
    mid, half = (z1 + z2) / 2, (z2 - z1) / 2
    val = mpmath.quad(lambda t: mpmath.sqrt(max(f(mid + half * mpmath.sin(t)), 0)) * half * mpmath.cos(t), [-mpmath.pi / 2, 0, mpmath.pi / 2])
    assert r.integral_over_pi == pytest.approx(float(val / mpmath.pi), abs=1e-12)
