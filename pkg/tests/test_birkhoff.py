import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ietlab.analysis import bc_periodic
from ietlab.birkhoff import (
    birkhoff_sum, bounded_times, certified_lower_sums, naive_birkhoff_sum, special_birkhoff_sum,
    tower_special_sums, wandering_series,
)
from ietlab.cocycle import InductionChain
from ietlab.core import Iet
from ietlab.core.permutation import all_irreducible
from ietlab.errors import Connection


def test_rotation_sums(rot23):
    om = (F(1), F(-2))
    assert [naive_birkhoff_sum(rot23, om, F(0), n) for n in (1, 2, 3)] == [1, 2, 0]
    # T^-1(0) = 2/3 lies in B, so S_-1 = -f(2/3) = 2
    assert naive_birkhoff_sum(rot23, om, F(0), -1) == 2
    assert naive_birkhoff_sum(rot23, om, F(0), 0) == 0


def _instance(data):
    d = data.draw(st.integers(2, 4))
    perms = all_irreducible(d)
    p = perms[data.draw(st.integers(0, len(perms) - 1))]
    ks = data.draw(st.lists(st.integers(1, 10**6), min_size=d, max_size=d))
    s = sum(ks)
    om = tuple(F(data.draw(st.integers(-9, 9))) for _ in range(d))
    return Iet(p, [F(k, s) for k in ks]), om


@given(st.data())
def test_cocycle_relation_naive(data):
    T, om = _instance(data)
    x = F(data.draw(st.integers(0, 10**6 - 1)), 10**6)
    n = data.draw(st.integers(-60, 60))
    m = data.draw(st.integers(-60, 60))
    Tnx = x
    for _ in range(abs(n)):
        Tnx = T(Tnx) if n > 0 else T.inverse(Tnx)
    assert naive_birkhoff_sum(T, om, x, n + m) == naive_birkhoff_sum(T, om, x, n) + naive_birkhoff_sum(T, om, Tnx, m)


@given(st.data())
def test_tower_sum_equals_naive(data):
    T, om = _instance(data)
    ch = InductionChain(T, steps=14, stop_at_connection=True)
    x = F(data.draw(st.integers(0, 10**6 - 1)), 10**6)
    n = data.draw(st.integers(-400, 400))
    assert birkhoff_sum(T, om, x, n, chain=ch) == naive_birkhoff_sum(T, om, x, n)


@given(st.data())
def test_special_sums(data):
    T, om = _instance(data)
    ch = InductionChain(T, steps=10, stop_at_connection=True)
    n = ch.depth
    assert special_birkhoff_sum(T, om, 0, chain=ch) == om
    want = ch.accumulate(0, n).apply(om)
    assert special_birkhoff_sum(T, om, n, chain=ch) == want
    assert tower_special_sums(T, om, n, chain=ch) == want


def test_special_sums_level_recursion(golden):
    # level n+1 value on the loser = level-n loser value + level-n winner value
    om = (F(3), F(-1))
    ch = InductionChain(golden, steps=12)
    sums = ch.special_sums(om)
    for k, mv in enumerate(ch.moves):
        idx = ch.maps[k].perm.index
        assert sums[k + 1][idx(mv.loser)] == sums[k][idx(mv.loser)] + sums[k][idx(mv.winner)]
        assert sums[k + 1][idx(mv.winner)] == sums[k][idx(mv.winner)]
    assert sums[12] == tower_special_sums(golden, om, 12, chain=ch)


def test_periodic_special_sums_constant(periodic):
    T0 = periodic.iet()
    p = periodic.period
    ch = InductionChain(T0, steps=10 * p)
    sums = ch.special_sums(periodic.omega)
    for k in range(11):
        assert sums[k * p] == tuple(periodic.omega)


@pytest.fixture(scope="module")
def periodic_bc(periodic):
    ws, chain = bc_periodic(periodic, 8)
    return ws[0], chain


def test_bounded_times_base_point(periodic, periodic_bc):
    bc, chain = periodic_bc
    om = periodic.omega
    sums = chain.special_sums(om)
    rk, _ = bc.rv_times[2]
    Tk = chain.maps[rk]
    for a in Tk.perm.alphabet:
        w = bounded_times(chain, Tk.top_left(a), 2, bc, om, sums=sums)
        assert w.i == 0 and w.m_plus == w.j_plus and w.m_minus == -w.j_minus
        assert w.membership and w.decomposition_ok and w.holds


def test_bounded_times_certificates(periodic, periodic_bc):
    bc, chain = periodic_bc
    om = periodic.omega
    sums = chain.special_sums(om)
    T0 = chain.maps[0]
    for s in range(12):
        x = T0.total * F(2 * s + 1, 24)
        k = s % len(bc.rv_times)
        w = bounded_times(chain, x, k, bc, om, sums=sums)
        assert w.membership and w.decomposition_ok
        assert w.m_minus < 0 < w.m_plus
        assert abs(w.s_plus) <= w.bound and abs(w.s_minus) <= w.bound
        assert w.pieces_plus <= 2 * bc.K and w.pieces_minus <= 2 * bc.K
        if k <= 4:
            # returns land on the floor of x, by direct iteration (|m| stays below 10^4 here)
            y = x
            for _ in range(w.m_plus):
                y = T0(y)
            assert chain.locate(y, w.rv_k)[:2] == (w.alpha, w.i)
            assert w.s_plus == float(naive_birkhoff_sum(T0, om, x, w.m_plus))
            assert w.s_minus == float(naive_birkhoff_sum(T0, om, x, w.m_minus))


def test_wandering_flat():
    T = Iet(all_irreducible(3)[0], [F(1, 2), F(1, 3), F(1, 6)])
    ser = wandering_series(T, (0, 0, 0), F(1, 7), 200)
    assert ser.forward[-1] == 200 and ser.backward[-1] == 201
    assert not ser.candidate


def test_certified_lower_sums_linear(periodic, periodic_bc):
    bc, chain = periodic_bc
    om = periodic.omega
    sums = chain.special_sums(om)
    x = chain.maps[0].total / 5
    ws = [bounded_times(chain, x, k, bc, om, sums=sums) for k in range(len(bc.rv_times))]
    fw, bw = certified_lower_sums(ws)
    floor = math.exp(-ws[0].bound)
    for k, (a, b) in enumerate(zip(fw, bw)):
        assert a >= (k + 1) * floor and b >= (k + 1) * floor


def test_connection_in_rational_chain():
    T = Iet(all_irreducible(2)[0], [F(3, 5), F(2, 5)])
    with pytest.raises(Connection):
        InductionChain(T, steps=30)
