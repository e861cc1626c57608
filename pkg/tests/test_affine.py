from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ietlab.affine import build_aiet, check_compatibility, log_slope_at, pull_back, seed_lengths
from ietlab.cocycle import InductionChain
from ietlab.core import hp_context
from ietlab.errors import IncompatibleOmega
from ietlab.rauzy import rotation_number_prefix


def _phi(golden):
    return golden.lengths[0] + 1


def test_compat_zero(golden):
    assert check_compatibility(golden, (0, 0)) == 0


def test_compat_golden_stable(golden):
    phi = _phi(golden)
    assert check_compatibility(golden, (phi.field.one(), -phi)) == 0


def test_compat_constant_rejected(periodic):
    T0 = periodic.iet()
    assert check_compatibility(T0, (1, 1, 1)) == T0.total
    with pytest.raises(IncompatibleOmega):
        build_aiet(T0, (1, 1, 1))


def test_omega_zero_is_the_iet(periodic):
    T0 = periodic.iet()
    res = build_aiet(T0, (0, 0, 0))
    assert res.aiet.is_flat() and res.aiet.lengths == T0.lengths


def test_seed_single_sign():
    with pytest.raises(IncompatibleOmega):
        seed_lengths([1, 2, 3], hp_context(64))


def test_golden_small_stable(golden):
    phi = _phi(golden)
    t = F(1, 10)
    res = build_aiet(golden, (phi.field.one() * t, -phi * t), depth=40)
    ch = InductionChain(res.aiet, zorich=30)
    assert set(ch.zorich_lengths()[:30]) == {1}
    assert ch.path(30).types() == rotation_number_prefix(golden, 30).types()


def test_periodic_converges(periodic):
    res = build_aiet(periodic.iet(), periodic.omega, depth=40)
    assert res.gap < 1e-8 and res.zorich_depth <= 40
    assert res.closing_defect < 1e-60
    assert res.history[0][0] == 40


def test_log_slope_push(periodic):
    res = build_aiet(periodic.iet(), periodic.omega, depth=40)
    om = log_slope_at(res.aiet, 12)
    # two periods: the central vector is fixed by the loop, exactly
    assert om == tuple(periodic.omega)


def test_pull_back_prefix(periodic):
    path = periodic.repeated(8)
    ctx = hp_context(256)
    T = pull_back(path, periodic.omega, 30, ctx)
    assert rotation_number_prefix(T, 30).types() == path.types()[:30]


@settings(max_examples=15)
@given(st.fractions(F(1, 20), F(3)))
def test_scaled_central_builds(periodic, t):
    om = tuple(v * t for v in periodic.omega)
    res = build_aiet(periodic.iet(), om, depth=40)
    assert res.gap < 1e-8
    assert abs(float(res.aiet.total) - 1) < 1e-30
    assert rotation_number_prefix(res.aiet, res.prefix).types() == periodic.repeated(res.prefix // 6 + 1).types()[:res.prefix]
