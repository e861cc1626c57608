"""Accumulated cocycles, return times and Rohlin towers along an induction chain.

Matrix convention used throughout: Z_{m,n} is the incidence matrix whose
entry (alpha, beta) counts the visits of the T^(m)-orbit of a point of
I^(n)_alpha to I^(m)_beta before it returns to I^(n).  It is the transpose
of the length matrix A_m ... A_{n-1}, composes as Z_{m,n} = Z_{k,n} Z_{m,k},
and its row sums are heights: q^(n) = Z_{0,n} 1.
"""
from bisect import bisect_right
from dataclasses import dataclass

from .core.intmat import IntMatrix
from .errors import Connection, OutOfDomain
from .rauzy import DEFAULT_GUARD_BITS, RauzyPath, rv_step, rv_type


def accumulate(path, m=0, n=None):
    """Z_{m,n} for the moves of ``path``."""
    if n is None:
        n = len(path.moves)
    if not 0 <= m <= n <= len(path.moves):
        raise ValueError("need 0 <= m <= n <= len(path)")
    alphabet = path.start.alphabet
    idx = {a: i for i, a in enumerate(alphabet)}
    d = len(alphabet)
    Z = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for mv in path.moves[m:n]:
        w, l = idx[mv.winner], idx[mv.loser]
        rw, rl = Z[w], Z[l]
        for j in range(d):
            rl[j] += rw[j]
    return IntMatrix(alphabet, Z)


def heights_at(path, n):
    return accumulate(path, 0, n).row_sums()


def subtower_count(path, m, n, a):
    Z = accumulate(path, m, n)
    return sum(Z.rows[Z.alphabet.index(a)])


@dataclass
class TowerPartition:
    """Level-n Rohlin towers: floors (symbol, floor index, left, width)."""

    level: int
    heights: dict
    bases: dict
    floors: list

    def cells(self):
        return self.floors

    def mesh(self):
        return max(f[3] for f in self.floors)

    def locate(self, x):
        keys = [f[2] for f in self.floors]
        k = bisect_right(keys, x) - 1
        if k < 0:
            raise OutOfDomain(f"{x} left of the domain")
        a, j, left, width = self.floors[k]
        if not x < left + width:
            raise OutOfDomain(f"{x} not covered")
        return a, j

    def coverage_defect(self, total):
        """Sum of gaps and overlaps between consecutive floors (0 for a partition)."""
        defect = self.floors[0][2] * 0
        pos = self.floors[0][2] * 0
        for _, _, left, width in self.floors:
            defect = defect + abs(left - pos)
            pos = left + width
        return defect + abs(total - pos)


class InductionChain:
    """Maps T^(0..n), moves and heights of the Rauzy-Veech induction of T.

    ``steps`` counts RV steps; ``zorich`` (if given) asks instead for at
    least that many complete Zorich blocks (the lookahead that closes the
    last block may close one more).  With ``stop_at_connection`` a tie ends
    the chain early and is kept in ``connection``; otherwise it propagates
    with the partial chain attached.
    """

    def __init__(self, T, steps=None, zorich=None, guard_bits=DEFAULT_GUARD_BITS, stop_at_connection=False):
        self.guard_bits = guard_bits
        self.maps = [T]
        self.moves = []
        d = T.perm.d
        self.heights = [tuple([1] * d)]
        self.connection = None
        self._ztimes = [0]
        self.lookahead = None
        if steps is None and zorich is None:
            raise ValueError("give steps or zorich")
        try:
            if zorich is not None:
                while len(self._ztimes) <= zorich:
                    self._push()
                    if len(self._ztimes) > zorich:
                        break
                # the last block closes when the next type differs
                self._close_lookahead()
            else:
                for _ in range(steps):
                    self._push()
                self._close_lookahead()
        except Connection as e:
            self.connection = e
            if not stop_at_connection:
                e.partial = self
                raise
        self._minq = [min(q) for q in self.heights]

    def _push(self):
        n = len(self.moves)
        Tn = self.maps[-1]
        T1, mv = rv_step(Tn, self.guard_bits, n)
        if self.moves and self.moves[-1].type != mv.type:
            self._ztimes.append(n)
        self.moves.append(mv)
        self.maps.append(T1)
        idx = Tn.perm.index
        q = list(self.heights[-1])
        q[idx(mv.loser)] += q[idx(mv.winner)]
        self.heights.append(tuple(q))

    def _close_lookahead(self):
        n = len(self.moves)
        self.lookahead = rv_type(self.maps[-1], self.guard_bits, n)
        if n and self.lookahead != self.moves[-1].type and self._ztimes[-1] != n:
            self._ztimes.append(n)

    # -- basic data -----------------------------------------------------
    @property
    def depth(self):
        return len(self.moves)

    @property
    def alphabet(self):
        return self.maps[0].perm.alphabet

    def path(self, n=None):
        return RauzyPath(self.maps[0].perm, self.moves[: self.depth if n is None else n])

    def zorich_times(self):
        """RV indices r_0 = 0 < r_1 < ... closing complete Zorich blocks."""
        return list(self._ztimes)

    def zorich_lengths(self):
        t = self._ztimes
        return [b - a for a, b in zip(t, t[1:])]

    def level(self, m):
        return self.maps[m]

    def lengths(self, m):
        return self.maps[m].lengths

    def heights_at(self, m):
        return self.heights[m]

    def accumulate(self, m=0, n=None):
        return accumulate(self.path(), m, self.depth if n is None else n)

    def special_sums(self, omega):
        """Z_{0,m} omega for every level m (list of tuples)."""
        out = [tuple(omega)]
        cur = list(omega)
        for k, mv in enumerate(self.moves):
            idx = self.maps[k].perm.index
            l, w = idx(mv.loser), idx(mv.winner)
            cur[l] = cur[l] + cur[w]
            out.append(tuple(cur))
        return out

    # -- tower navigation -----------------------------------------------
    def locate(self, x, n):
        """First backward entrance of x into I^(n): (alpha, i, y) with x = T^i(y)."""
        T0 = self.maps[0]
        if x < 0 or not x < T0.total:
            raise OutOfDomain(f"{x} outside the domain")
        y, i = x, 0
        for m in range(n):
            Tm1 = self.maps[m + 1]
            if y < Tm1.total:
                continue
            Tm = self.maps[m]
            y = Tm.inverse(y)
            i += self.heights[m][Tm.perm.index(Tm.perm.bottom[-1])]
        Tn = self.maps[n]
        return Tn.symbol_at(y), i, y

    def _descend(self, n, y, s, sums=None):
        """T^s(y) for y in I^(n) and 0 <= s <= q^(n)_y, with the Birkhoff sum if ``sums``."""
        Tn = self.maps[n]
        g = Tn.symbol_at(y)
        q = self.heights[n][Tn.perm.index(g)]
        if not 0 <= s <= q:
            raise ValueError("floor index outside the tower")
        acc = None
        if s == q:
            if sums is not None:
                acc = sums[n][Tn.perm.index(g)]
            return Tn(y), acc
        for m in range(n, 0, -1):
            if s == 0:
                break
            k = m - 1
            mv = self.moves[k]
            if self.maps[m].symbol_at(y) != mv.loser:
                continue
            Tk = self.maps[k]
            a1 = Tk.perm.bottom[-1]
            h = self.heights[k][Tk.perm.index(a1)]
            if s >= h:
                s -= h
                if sums is not None:
                    v = sums[k][Tk.perm.index(a1)]
                    acc = v if acc is None else acc + v
                y = Tk(y)
        if s != 0:
            raise AssertionError("tower descent did not terminate at a base")
        return y, acc

    def advance(self, n, y, s):
        return self._descend(n, y, s)[0]

    def best_level(self, t):
        t = abs(t)
        best, cost = 0, None
        for m, mq in enumerate(self._minq):
            c = m + t // mq
            if cost is None or c < cost:
                best, cost = m, c
        return best

    def walk(self, x, t, level=None, sums=None):
        """(T^t x, S_t) using towers at ``level``; S_t is None without ``sums``."""
        n = self.best_level(t) if level is None else level
        Tn = self.maps[n]
        qn = self.heights[n]
        idx = Tn.perm.index
        a, i, y = self.locate(x, n)
        p = i + t
        z = y
        acc = None
        if sums is not None:
            _, head = self._descend(n, y, i, sums)
            acc = -head if head is not None else None
        if t >= 0:
            while True:
                b = Tn.symbol_at(z)
                h = qn[idx(b)]
                if p < h:
                    break
                if sums is not None:
                    v = sums[n][idx(b)]
                    acc = v if acc is None else acc + v
                p -= h
                z = Tn(z)
        else:
            while p < 0:
                z = Tn.inverse(z)
                b = Tn.symbol_at(z)
                p += qn[idx(b)]
                if sums is not None:
                    v = sums[n][idx(b)]
                    acc = -v if acc is None else acc - v
        w, part = self._descend(n, z, p, sums)
        if sums is not None and part is not None:
            acc = part if acc is None else acc + part
        return w, acc

    def iterate(self, x, t, level=None):
        return self.walk(x, t, level)[0]

    def birkhoff(self, x, t, omega, level=None, sums=None):
        """S_t f_omega(x) through tower decomposition (omega indexed by alphabet)."""
        if sums is None:
            sums = self.special_sums(omega)
        if t == 0:
            return omega[0] * 0
        if t > 0:
            _, acc = self.walk(x, t, level, sums)
            return acc if acc is not None else omega[0] * 0
        # S_t(x) = -S_{|t|}(T^t x) for t < 0
        z = self.iterate(x, t, level)
        _, acc = self.walk(z, -t, level, sums)
        return -acc if acc is not None else omega[0] * 0

    def partition(self, n):
        return dynamical_partition_from_chain(self, n)


def dynamical_partition_from_chain(chain, n):
    """Enumerate every floor of the level-n towers (only for moderate heights)."""
    T = chain.maps[0]
    Tn = chain.maps[n]
    q = chain.heights[n]
    floors = []
    bases = {}
    heights = {}
    for a in Tn.perm.alphabet:
        k = Tn.perm.index(a)
        left = Tn.top_left(a)
        width = Tn.length(a)
        bases[a] = (left, width)
        heights[a] = q[k]
        x = left
        affine = hasattr(T, "slopes") and not T.is_flat()
        for j in range(q[k]):
            floors.append((a, j, x, width))
            if j + 1 < q[k]:
                # left endpoints can sit on discontinuities: pick the branch at the midpoint
                s = T.symbol_at(x + width / 2)
                if affine:
                    x = T.bottom_left(s) + T.slope(s) * (x - T.top_left(s))
                    width = width * T.slope(s)
                else:
                    x = x - T.top_left(s) + T.bottom_left(s)
    floors.sort(key=lambda f: f[2])
    return TowerPartition(n, heights, bases, floors)


def lengths_at(T, n, guard_bits=DEFAULT_GUARD_BITS):
    return InductionChain(T, steps=n, guard_bits=guard_bits).lengths(n)


def dynamical_partition(T, n, guard_bits=DEFAULT_GUARD_BITS):
    return InductionChain(T, steps=n, guard_bits=guard_bits).partition(n)


def locate(partition, x):
    return partition.locate(x)
