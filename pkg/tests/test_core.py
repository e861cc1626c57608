from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from ietlab.core import Aiet, Iet, NumberField, Permutation, hp_context, make_permutation, symmetric_permutation
from ietlab.core import specfile
from ietlab.core.permutation import all_irreducible
from ietlab.errors import ClosingConditionViolated, NotABijection, OutOfDomain, Reducible


def test_symmetric_is_valid():
    p = make_permutation("ABC", "CBA")
    assert p.d == 3 and p.top_last == "C" and p.bottom_last == "A"


def test_reducible_reports_k():
    with pytest.raises(Reducible) as e:
        make_permutation("ABC", "ACB")
    assert e.value.k == 1


def test_rotation_datum_valid():
    assert make_permutation("AB", "BA").pi1("A") == 2


@pytest.mark.parametrize("top,bottom", [("AB", "AA"), ("AB", "BC"), ("A", "A")])
def test_not_bijection(top, bottom):
    with pytest.raises(NotABijection):
        make_permutation(top, bottom)


def test_irreducible_counts():
    # counts of irreducible permutations of 2..6 letters (OEIS A003319)
    assert [len(all_irreducible(d)) for d in range(2, 7)] == [1, 3, 13, 71, 461]


def test_rotation_values(rot23):
    assert rot23(F(0)) == F(1, 3)
    assert rot23(F(2, 3)) == 0
    assert rot23.singularities() == [F(2, 3)]


def test_singularities_d3():
    T = Iet(symmetric_permutation(3), [F(1, 2), F(1, 3), F(1, 6)])
    assert T.singularities() == [F(1, 2), F(5, 6)]


def test_translation_formula():
    T = Iet(Permutation("ABC", "CAB"), [F(1, 2), F(1, 4), F(1, 4)])
    assert T(F(1, 8)) == F(1, 8) + F(1, 4)
    # translation formula: x - top_left + bottom_left
    for x in (F(0), F(1, 3), F(3, 5), F(7, 8)):
        a = T.symbol_at(x)
        assert T(x) == x - T.top_left(a) + T.bottom_left(a)


def test_out_of_domain(rot23):
    with pytest.raises(OutOfDomain):
        rot23(F(1))
    with pytest.raises(OutOfDomain):
        rot23(F(-1, 5))


def test_inverse_singularities_are_image_left_ends():
    T = Iet(symmetric_permutation(3), [F(1, 2), F(1, 3), F(1, 6)])
    # bottom row C B A: images of the top left ends of B and A
    assert T.inverse_singularities() == [T(T.top_left("B")), T(T.top_left("A"))]


lengths = st.lists(st.integers(1, 10**6), min_size=2, max_size=5)


@given(lengths, st.data())
def test_iet_bijection(ks, data):
    d = len(ks)
    perms = all_irreducible(d)
    p = perms[data.draw(st.integers(0, len(perms) - 1))]
    s = sum(ks)
    T = Iet(p, [F(k, s) for k in ks])
    x = F(data.draw(st.integers(0, 10**9 - 1)), 10**9)
    assert T.inverse(T(x)) == x
    assert 0 <= T(x) < 1


def test_aiet_flat_agrees_with_iet():
    T = Iet(symmetric_permutation(3), [F(1, 2), F(1, 3), F(1, 6)])
    A = Aiet(T.perm, T.lengths, (0, 0, 0))
    for k in range(60):
        x = F(k, 60)
        assert A(x) == T(x)


def test_aiet_image_length():
    ctx = hp_context(128)
    A = Aiet(Permutation("AB", "BA"), [F(1, 2), F(1, 2)], [ctx.log(ctx.mpf(3) / 2), ctx.log(ctx.mpf(1) / 2)])
    assert abs(A.image_length("A") - ctx.mpf(3) / 4) < ctx.mpf(2) ** -120


def test_closing_violation():
    with pytest.raises(ClosingConditionViolated):
        Aiet(Permutation("AB", "BA"), [F(1, 2), F(1, 2)], [F(1, 10), F(1, 10)])


def test_aiet_inverse_roundtrip():
    ctx = hp_context(128)
    w = ctx.log(ctx.mpf(3) / 2)
    A = Aiet(Permutation("AB", "BA"), [F(1, 2), F(1, 2)], [w, ctx.log(ctx.mpf(1) / 2)])
    for k in range(1, 40):
        x = ctx.mpf(k) / 40
        assert abs(A.inverse(A(x)) - x) < ctx.mpf(2) ** -120


def test_field_golden_identity():
    K = NumberField([-1, -1, 1], [1, 2])
    phi = K.gen()
    assert phi * phi == phi + 1
    assert phi - 1 > 2 - phi
    assert abs(float(phi) - (1 + 5 ** 0.5) / 2) < 1e-15
    assert (phi - 1) * phi == 1


def test_specfile_roundtrip(tmp_path):
    T = Iet(symmetric_permutation(3), [F(1, 2), F(1, 3), F(1, 6)])
    path = tmp_path / "t.json"
    specfile.dump(T, path)
    U = specfile.load(path)
    assert U.perm == T.perm and U.lengths == T.lengths


def test_specfile_field(tmp_path, golden):
    path = tmp_path / "g.json"
    specfile.dump(golden, path)
    U = specfile.load(path)
    assert U.lengths == golden.lengths
