from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import first_return
from ietlab.cocycle import InductionChain, accumulate, dynamical_partition, subtower_count
from ietlab.core import Iet
from ietlab.core.permutation import all_irreducible
from ietlab.errors import Connection


def _chain(data, dmax=4, steps=12):
    d = data.draw(st.integers(2, dmax))
    perms = all_irreducible(d)
    p = perms[data.draw(st.integers(0, len(perms) - 1))]
    ks = data.draw(st.lists(st.integers(1, 10**6), min_size=d, max_size=d))
    s = sum(ks)
    T = Iet(p, [F(k, s) for k in ks])
    return InductionChain(T, steps=steps, stop_at_connection=True)


@given(st.data())
def test_composition(data):
    ch = _chain(data)
    n = ch.depth
    m = data.draw(st.integers(0, n))
    k = data.draw(st.integers(m, n))
    assert ch.accumulate(m, n) == ch.accumulate(k, n) @ ch.accumulate(m, k)


@given(st.data())
def test_heights_are_return_times(data):
    ch = _chain(data)
    n = ch.depth
    T = ch.maps[0]
    Tn = ch.maps[n]
    q = ch.accumulate(0, n).row_sums()
    assert q == ch.heights_at(n)
    for a in Tn.perm.alphabet:
        x = Tn.top_left(a) + Tn.length(a) / 3
        assert first_return(T, x, Tn.total)[1] == q[Tn.perm.index(a)]


@given(st.data())
def test_mass_identity(data):
    ch = _chain(data)
    for n in range(ch.depth + 1):
        q = ch.heights_at(n)
        assert sum(h * v for h, v in zip(q, ch.lengths(n))) == ch.maps[0].total


def test_subtower_count(golden):
    ch = InductionChain(golden, steps=8)
    Z = ch.accumulate(3, 8)
    for a in ch.alphabet:
        assert subtower_count(ch.path(), 3, 8, a) == sum(Z.rows[ch.alphabet.index(a)])


def test_identity_for_empty_range(golden):
    ch = InductionChain(golden, steps=4)
    assert ch.accumulate(2, 2).rows == ((1, 0), (0, 1))
    with pytest.raises(ValueError):
        accumulate(ch.path(), 3, 2)


@given(st.data())
def test_partition_floors(data):
    ch = _chain(data, steps=8)
    n = ch.depth
    T = ch.maps[0]
    P = ch.partition(n)
    assert P.coverage_defect(T.total) == 0
    assert len(P.floors) == sum(ch.heights_at(n))
    # floor j of tower a is T^j of its base, by direct iteration
    Tn = ch.maps[n]
    for a, j, left, width in P.floors:
        x = Tn.top_left(a)
        for _ in range(j):
            x = T(x)
        assert x == left and width == Tn.length(a)


@given(st.data())
def test_locate_and_iterate(data):
    ch = _chain(data, steps=10)
    n = ch.depth
    T = ch.maps[0]
    x = F(data.draw(st.integers(0, 10**6 - 1)), 10**6)
    a, i, y = ch.locate(x, n)
    z = y
    for _ in range(i):
        z = T(z)
    assert z == x and ch.maps[n].symbol_at(y) == a
    t = data.draw(st.integers(-300, 300))
    w = x
    if t >= 0:
        for _ in range(t):
            w = T(w)
    else:
        for _ in range(-t):
            w = T.inverse(w)
    assert ch.iterate(x, t) == w


def test_connection_stops_chain():
    T = Iet(all_irreducible(2)[0], [F(3, 5), F(2, 5)])
    ch = InductionChain(T, steps=20, stop_at_connection=True)
    assert ch.connection is not None and ch.depth == ch.connection.step
    with pytest.raises(Connection):
        InductionChain(T, steps=20)


def test_dynamical_partition_golden(golden):
    P = dynamical_partition(golden, 10)
    assert P.coverage_defect(golden.total) == 0
    assert float(P.mesh()) < 0.02


def test_zorich_times_golden(golden):
    ch = InductionChain(golden, zorich=20)
    z = ch.zorich_lengths()
    assert len(z) >= 20 and set(z) == {1}
