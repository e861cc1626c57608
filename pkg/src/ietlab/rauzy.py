"""Rauzy-Veech induction, Zorich acceleration and the Rauzy graph.

Conventions: alpha0 is the last top symbol, alpha1 the last bottom symbol.
A step has type 0 when the last top interval is strictly longer than the
image of the last bottom interval (then alpha0 wins), type 1 when it is
strictly shorter (alpha1 wins).  Induction is not normalized: after a step
the domain is [0, |lengths'|).
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .core.intmat import IntMatrix
from .core.maps import Aiet, Iet
from .core.permutation import Permutation, all_irreducible
from .core.scalars import is_hp, to_hp as _hp
from .errors import Connection, InconsistentMove

DEFAULT_GUARD_BITS = 80


@dataclass(frozen=True)
class RauzyMove:
    type: int
    winner: object
    loser: object
    source: Permutation
    target: Permutation

    def matrix(self):
        """One-step length matrix Id + E_{winner, loser}."""
        return IntMatrix.elementary(self.source.alphabet, self.winner, self.loser)

    def to_dict(self):
        return {"type": self.type, "winner": self.winner, "loser": self.loser}


def make_move(perm, eps):
    if eps == 0:
        w, l = perm.top[-1], perm.bottom[-1]
    else:
        w, l = perm.bottom[-1], perm.top[-1]
    return RauzyMove(eps, w, l, perm, perm.rauzy(eps))


@dataclass
class RauzyPath:
    start: Permutation
    moves: tuple = ()
    connection: object = field(default=None, compare=False)

    def __post_init__(self):
        self.moves = tuple(self.moves)
        p = self.start
        for m in self.moves:
            if m.source != p:
                raise InconsistentMove("moves do not compose")
            p = m.target

    def __len__(self):
        return len(self.moves)

    @property
    def end(self):
        return self.moves[-1].target if self.moves else self.start

    def types(self):
        return [m.type for m in self.moves]

    def prefix(self, n):
        return RauzyPath(self.start, self.moves[:n])

    def zorich_blocks(self):
        """Maximal runs of constant type as (start, stop) index pairs.

        The final run is included even though a longer path could extend it.
        """
        out = []
        i = 0
        n = len(self.moves)
        while i < n:
            j = i + 1
            while j < n and self.moves[j].type == self.moves[i].type:
                j += 1
            out.append((i, j))
            i = j
        return out

    def zorich_times(self, complete_only=True):
        """RV indices 0 = r_0 < r_1 < ... ending Zorich blocks."""
        blocks = self.zorich_blocks()
        if complete_only and blocks and self.connection is None:
            blocks = blocks[:-1]
        return [0] + [b for _, b in blocks]

    def winners(self, i=0, j=None):
        return {m.winner for m in self.moves[i:j]}

    def complete_segments(self):
        """Greedy split into consecutive segments in which every symbol wins."""
        alphabet = set(self.start.alphabet)
        cuts = [0]
        seen = set()
        for k, m in enumerate(self.moves):
            seen.add(m.winner)
            if seen == alphabet:
                cuts.append(k + 1)
                seen = set()
        return cuts

    def is_complete_on(self, window):
        """Every consecutive window of ``window`` moves contains every winner."""
        alphabet = set(self.start.alphabet)
        for i in range(0, max(len(self.moves) - window + 1, 0)):
            if self.winners(i, i + window) != alphabet:
                return False
        return True

    def to_records(self):
        return [m.to_dict() for m in self.moves]


def _compare(a, b, total, guard_bits, step):
    """Sign of a - b, raising Connection on a tie."""
    if is_hp(a) or is_hp(b):
        gap = a - b
        ctx = (a if is_hp(a) else b).context
        if abs(gap) <= total * ctx.ldexp(1, -guard_bits):
            raise Connection(step, (a, b), guarded=True)
        return 1 if gap > 0 else -1
    if a == b:
        raise Connection(step, (a, b))
    return 1 if a > b else -1


def rv_type(T, guard_bits=DEFAULT_GUARD_BITS, step=0):
    p = T.perm
    a0, a1 = p.top[-1], p.bottom[-1]
    return 0 if _compare(T.length(a0), T.image_length(a1), T.total, guard_bits, step) > 0 else 1


def rv_step(T, guard_bits=DEFAULT_GUARD_BITS, step=0):
    """One Rauzy-Veech step: (induced map, move)."""
    eps = rv_type(T, guard_bits, step)
    move = make_move(T.perm, eps)
    return apply_move(T, move), move


def apply_move(T, move):
    """Induce ``T`` along ``move`` without checking the type."""
    p = T.perm
    a0, a1 = p.top[-1], p.bottom[-1]
    i0, i1 = p.index(a0), p.index(a1)
    lam = list(T.lengths)
    if isinstance(T, Iet) or (isinstance(T, Aiet) and T.is_flat()):
        w, l = p.index(move.winner), p.index(move.loser)
        lam[w] = lam[w] - lam[l]
        if isinstance(T, Iet):
            return Iet(move.target, lam, check=False)
        return Aiet(move.target, lam, T.omega, bits=T.bits, check=False)
    om = list(T.omega)
    if move.type == 0:
        lam[i0] = lam[i0] - lam[i1] * T.slopes[i1]
        om[i1] = om[i1] + om[i0]
    else:
        s1 = T.slopes[i1]
        lam[i1] = lam[i1] - lam[i0] / s1
        lam[i0] = lam[i0] / s1
        om[i0] = om[i0] + om[i1]
    return Aiet(move.target, lam, om, bits=T.bits, check=False)


def inverse_rv_step(Tp, move):
    """Undo one step: the map whose rv_step along ``move`` is ``Tp``."""
    if move.target != Tp.perm:
        raise InconsistentMove("move target does not match the permutation")
    src = move.source
    if Tp.perm.alphabet != src.alphabet:
        src = src.relabeled(Tp.perm.alphabet)
    a0, a1 = src.top[-1], src.bottom[-1]
    i0, i1 = src.index(a0), src.index(a1)
    lam = list(Tp.lengths)
    if isinstance(Tp, Iet) or (isinstance(Tp, Aiet) and Tp.is_flat()):
        w, l = src.index(move.winner), src.index(move.loser)
        lam[w] = lam[w] + lam[l]
        if isinstance(Tp, Iet):
            return Iet(src, lam, check=False)
        return Aiet(src, lam, Tp.omega, bits=Tp.bits, check=False)
    ctx = Tp.ctx
    om = list(Tp.omega)
    if move.type == 0:
        om[i1] = om[i1] - om[i0]
        lam[i0] = lam[i0] + lam[i1] * ctx.exp(_hp(om[i1], ctx))
    else:
        om[i0] = om[i0] - om[i1]
        lam[i0] = lam[i0] * Tp.slopes[i1]
        lam[i1] = lam[i1] + lam[i0] / Tp.slopes[i1]
    return Aiet(src, lam, om, bits=Tp.bits, check=False)


def zorich_step(T, guard_bits=DEFAULT_GUARD_BITS, step=0):
    """Maximal run of equal-type RV steps: (T', z, moves).

    Needs one step of lookahead to know that the run has ended; the
    lookahead step is not applied.
    """
    T1, m = rv_step(T, guard_bits, step)
    moves = [m]
    while True:
        if rv_type(T1, guard_bits, step + len(moves)) != m.type:
            return T1, len(moves), moves
        T1, m2 = rv_step(T1, guard_bits, step + len(moves))
        moves.append(m2)


def rotation_number_prefix(T, n, guard_bits=DEFAULT_GUARD_BITS):
    """First ``n`` RV moves.  A Connection carries the partial path."""
    moves = []
    cur = T
    for k in range(n):
        try:
            cur, m = rv_step(cur, guard_bits, k)
        except Connection as e:
            e.partial = RauzyPath(T.perm, moves, connection=e)
            raise
        moves.append(m)
    return RauzyPath(T.perm, moves)


def rauzy_class(perm):
    """BFS closure under both Rauzy operations: (permutations, edges)."""
    seen = {perm: 0}
    order = [perm]
    edges = []
    q = deque([perm])
    while q:
        p = q.popleft()
        for eps in (0, 1):
            t = p.rauzy(eps)
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
                q.append(t)
            edges.append((p, eps, t))
    return order, edges


def reduced_class_key(perm):
    """Key identifying the Rauzy class up to relabelling (canonical smallest member)."""
    members, _ = rauzy_class(perm)
    return min(_standard(p) for p in members)


def _standard(p):
    rename = {a: i for i, a in enumerate(p.top)}
    return tuple(rename[a] for a in p.bottom)


def rauzy_classes(d):
    """Rauzy classes of irreducible permutations on d letters, up to relabelling.

    Returns [(representative, class size)], each class once.
    """
    seen = set()
    out = []
    for p in all_irreducible(d):
        if _standard(p) in seen:
            continue
        members, _ = rauzy_class(p)
        keys = {_standard(m) for m in members}
        seen |= keys
        out.append((p, len(keys)))
    return out


def loop_matrix(path):
    """A_0 A_1 ... A_{n-1}: lengths before the path = M @ lengths after."""
    alphabet = path.start.alphabet
    d = len(alphabet)
    M = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    idx = {a: i for i, a in enumerate(alphabet)}
    for mv in path.moves:
        w, l = idx[mv.winner], idx[mv.loser]
        # right-multiplication by Id + E_{w,l}: column l += column w
        for r in M:
            r[l] += r[w]
    return IntMatrix(alphabet, M)


def normalize(T):
    return T.normalized()


def cf_expansion(x, n):
    """First ``n`` partial quotients of a positive exact scalar (oracle helper)."""
    out = []
    for _ in range(n):
        a = int(_floor(x))
        out.append(a)
        x = x - a
        if x == 0:
            break
        x = 1 / x
    return out


def _floor(x):
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    f = int(float(x))
    while f > x:
        f -= 1
    while f + 1 <= x:
        f += 1
    return f


class RVKernel:
    """Bare Rauzy-Veech stepper on index lists, for long runs.

    Works on the lengths of an Iet (exact or mpf).  With ``renormalize``
    the lengths are divided by their sum whenever it drops below 2**-32 of
    the starting total; for mpf lengths this rounds, and ``shadow_steps``
    records how many steps were taken before the accumulated shrinking
    exceeded the mantissa (beyond that the path is that of a nearby map).
    """

    def __init__(self, T, guard_bits=DEFAULT_GUARD_BITS, renormalize=True):
        p = T.perm
        self.alphabet = p.alphabet
        self.top = [p.index(a) for a in p.top]
        self.bottom = [p.index(a) for a in p.bottom]
        self.lam = list(T.lengths)
        self.guard_bits = guard_bits
        self.renormalize = renormalize
        self.step_index = 0
        self.hp = any(is_hp(v) for v in self.lam)
        if self.hp:
            self.ctx = next(v for v in self.lam if is_hp(v)).context
            self.lam = [v if is_hp(v) else _hp(v, self.ctx) for v in self.lam]
            self._guard = self.ctx.ldexp(1, -guard_bits)
            self._budget = self.ctx.prec - guard_bits
        self.total = sum(self.lam[1:], self.lam[0])
        self._scale = self.total / (1 << 32)
        self.shrink_bits = 0.0
        self.shadow_steps = None

    def perm(self):
        a = self.alphabet
        return Permutation([a[i] for i in self.top], [a[i] for i in self.bottom], a, check=False)

    def step(self):
        """Advance one step; returns (type, winner index, loser index)."""
        lam = self.lam
        i0, i1 = self.top[-1], self.bottom[-1]
        a, b = lam[i0], lam[i1]
        if self.hp:
            gap = a - b
            if abs(gap) <= self.total * self._guard:
                raise Connection(self.step_index, (a, b), guarded=True)
            eps = 0 if gap > 0 else 1
        else:
            if a == b:
                raise Connection(self.step_index, (a, b))
            eps = 0 if a > b else 1
        if eps == 0:
            w, l = i0, i1
            row = self.bottom
        else:
            w, l = i1, i0
            row = self.top
        lam[w] = lam[w] - lam[l]
        self.total = self.total - lam[l]
        row.pop()
        row.insert(row.index(w) + 1, l)
        self.step_index += 1
        if self.renormalize and self.total < self._scale:
            t = self.total
            if self.hp:
                self.shrink_bits += float(self.ctx.log(self._scale * (1 << 32) / t, 2))
                if self.shadow_steps is None and self.shrink_bits > self._budget:
                    self.shadow_steps = self.step_index
            self.lam = [v / t for v in lam]
            self.total = sum(self.lam[1:], self.lam[0])
            self._scale = self.total / (1 << 32)
        return eps, w, l

    def next_type(self):
        i0, i1 = self.top[-1], self.bottom[-1]
        a, b = self.lam[i0], self.lam[i1]
        if self.hp:
            if abs(a - b) <= self.total * self._guard:
                raise Connection(self.step_index, (a, b), guarded=True)
        elif a == b:
            raise Connection(self.step_index, (a, b))
        return 0 if a > b else 1

    def zorich_step(self):
        """Steps of one complete Zorich block as a list of (type, w, l)."""
        out = [self.step()]
        while self.next_type() == out[0][0]:
            out.append(self.step())
        return out
