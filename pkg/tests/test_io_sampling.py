import json
from fractions import Fraction as F

from ietlab.analysis import semi_conjugacy
from ietlab.core import is_hp
from ietlab.core.scalars import to_fraction
from ietlab.io import read_csv, write_csv, write_json
from ietlab.plotting import plot_conjugacy, plot_slope_histogram
from ietlab.sampling import instance_rng, random_hp_iet, random_points, random_rational_iet


def test_rng_split_is_stable():
    a = [instance_rng(7, i).random() for i in range(5)]
    b = [instance_rng(7, i).random() for i in reversed(range(5))][::-1]
    assert a == b and len(set(a)) == 5
    assert instance_rng(8, 0).random() != a[0]


def test_rational_instance():
    T = random_rational_iet(instance_rng(1, 3), 4)
    assert T.total == 1 and T.perm.d == 4 and T.is_exact()


def test_hp_instance_is_dyadic():
    T = random_hp_iet(instance_rng(1, 0), 3)
    for v in T.lengths:
        assert is_hp(v)
        assert (to_fraction(v) * 2 ** 1024).denominator == 1
    for x in random_points(instance_rng(1, 1), T, 20):
        assert 0 <= x < T.total
        # T(x) is exact at the working precision
        y = T(x)
        assert to_fraction(y) == to_fraction(x) - to_fraction(T.top_left(T.symbol_at(x))) + \
            to_fraction(T.bottom_left(T.symbol_at(x)))


def test_json_and_csv(tmp_path):
    write_json(tmp_path / "a.json", {"v": F(1, 3), "w": [1.5]}, {"seed": 1})
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["data"] == {"v": "1/3", "w": [1.5]} and doc["meta"]["tool"] == "ietlab"
    write_csv(tmp_path / "a.csv", ["a", "b"], [(1, 0.25), (2, F(1, 2))], {"seed": 1})
    header, rows = read_csv(tmp_path / "a.csv")
    assert header == ["a", "b"] and rows == [["1", "0.25"], ["2", "1/2"]]


def test_svg_bytes_stable(tmp_path, golden):
    S = semi_conjugacy(golden.as_aiet(), golden, 6)
    plot_conjugacy(S, tmp_path / "a.svg")
    plot_conjugacy(S, tmp_path / "b.svg")
    plot_slope_histogram(S, tmp_path / "c.svg")
    plot_slope_histogram(S, tmp_path / "d.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    assert (tmp_path / "c.svg").read_bytes() == (tmp_path / "d.svg").read_bytes()
