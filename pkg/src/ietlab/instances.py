"""Reference instances: the golden rotation and periodic-type exchanges.

A periodic-type IET is built from a loop gamma in the Rauzy graph whose
matrix M = A_0 ... A_{p-1} is positive: its lengths are the Perron
eigenvector of M (an element of the field generated by the Perron root),
so that the induction repeats gamma forever.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .core.intmat import IntMatrix
from .core.maps import Iet
from .core.numberfield import NumberField
from .core.permutation import Permutation, symmetric_permutation
from .linalg import charpoly, nullspace, poly_divide_linear, poly_eval
from .rauzy import RauzyPath, loop_matrix, make_move


def golden_field():
    return NumberField([-1, -1, 1], [1, 2], name="phi")


def golden_iet():
    K = golden_field()
    phi = K.gen()
    return Iet(Permutation("AB", "BA"), [phi - 1, 2 - phi])


def path_from_types(start, types):
    moves = []
    p = start
    for t in types:
        m = make_move(p, t)
        moves.append(m)
        p = m.target
    return RauzyPath(start, moves)


def _isolate(poly, approx):
    """Rational interval around ``approx`` isolating a simple root of ``poly``."""
    w = Fraction(1, 64)
    c = Fraction(approx).limit_denominator(1 << 40)
    for _ in range(200):
        lo, hi = c - w, c + w
        a, b = poly_eval(poly, lo), poly_eval(poly, hi)
        if a != 0 and b != 0 and (a > 0) != (b > 0):
            try:
                NumberField(poly, (lo, hi))
                return lo, hi
            except ValueError:
                pass
        w /= 2
    raise ArithmeticError("could not isolate the Perron root")


def perron_field(M):
    """Number field of the Perron root of an integer matrix.

    Factors +-1 are divided out of the characteristic polynomial; the rest
    must be irreducible, which is certified for degree <= 3 (a monic
    polynomial with constant term +-1 has no rational roots besides +-1).
    Returns (field, theta, removed_unit_roots).
    """
    cp = charpoly(M.rows)
    removed = []
    changed = True
    while changed and len(cp) > 2:
        changed = False
        for r in (Fraction(1), Fraction(-1)):
            if poly_eval(cp, r) == 0:
                cp = poly_divide_linear(cp, r)
                removed.append(int(r))
                changed = True
    deg = len(cp) - 1
    if deg == 2:
        disc = cp[1] ** 2 - 4 * cp[0] * cp[2]
        if disc.denominator == 1 and disc >= 0 and int(disc ** 0.5) ** 2 == disc:
            raise ArithmeticError("Perron root is rational")
    elif deg > 3:
        raise NotImplementedError("irreducibility not certified beyond degree 3")
    ev = np.linalg.eigvals(np.array(M.rows, dtype=float))
    top = max(ev, key=lambda z: z.real).real
    lo, hi = _isolate(cp, top)
    K = NumberField(cp, (lo, hi), name="theta")
    return K, K.gen(), removed


def eigenvector(rows, value, field):
    """Exact eigenvector (rows - value I) v = 0 over ``field``."""
    d = len(rows)
    A = [[field([rows[i][j]]) - (value if i == j else 0) for j in range(d)] for i in range(d)]
    basis = nullspace(A, zero=field.zero())
    if len(basis) != 1:
        raise ArithmeticError(f"eigenspace has dimension {len(basis)}")
    return basis[0]


@dataclass
class PeriodicInstance:
    loop: RauzyPath
    matrix: IntMatrix
    field: NumberField
    theta: object
    lengths: tuple
    omega: tuple
    stable: tuple
    unit_roots: tuple

    @property
    def period(self):
        return len(self.loop)

    @property
    def types(self):
        return self.loop.types()

    def iet(self):
        return Iet(self.loop.start, self.lengths)

    def repeated(self, k):
        return path_from_types(self.loop.start, self.types * k)


def periodic_from_loop(loop):
    M = loop_matrix(loop)
    if not M.is_positive():
        raise ValueError("loop matrix is not positive")
    K, theta, removed = perron_field(M)
    lam = eigenvector(M.rows, theta, K)
    s = lam[0]
    for v in lam[1:]:
        s = s + v
    lam = [v / s for v in lam]
    if not all(v > 0 for v in lam):
        raise ArithmeticError("Perron eigenvector is not positive")
    Mt = M.T.rows
    central = nullspace([[Fraction(Mt[i][j] - (1 if i == j else 0)) for j in range(len(Mt))] for i in range(len(Mt))])
    omega = tuple(central[0]) if central else ()
    try:
        stable = tuple(eigenvector(Mt, theta.inverse(), K))
    except ArithmeticError:
        stable = ()
    return PeriodicInstance(loop, M, K, theta, tuple(lam), omega, stable, tuple(removed))


def find_periodic_loop(start=None, max_len=12, need_unit=True, zorich_aligned=True):
    """Shortest (then lexicographically first) positive loop at ``start``.

    With ``need_unit`` the loop matrix must have eigenvalue 1; with
    ``zorich_aligned`` first and last types differ, so period boundaries
    are Zorich times of the periodic path.
    """
    if start is None:
        start = symmetric_permutation(3)
    for p in range(1, max_len + 1):
        for types in product((0, 1), repeat=p):
            if zorich_aligned and (p < 2 or types[0] == types[-1]):
                continue
            perm = start
            for t in types:
                perm = perm.rauzy(t)
            if perm != start:
                continue
            loop = path_from_types(start, list(types))
            M = loop_matrix(loop)
            if not M.is_positive():
                continue
            if need_unit and poly_eval(charpoly(M.rows), 1) != 0:
                continue
            try:
                inst = periodic_from_loop(loop)
            except (ArithmeticError, NotImplementedError):
                continue
            if need_unit and not inst.omega:
                continue
            return inst
    return None


def golden_instance():
    """The golden rotation as a periodic instance of period 2."""
    loop = path_from_types(Permutation("AB", "BA"), [1, 0])
    return periodic_from_loop(loop)


def builtin(name):
    if name == "golden":
        return golden_iet()
    if name in ("periodic3", "periodic"):
        return find_periodic_loop().iet()
    raise KeyError(name)
