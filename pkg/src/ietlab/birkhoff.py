"""Birkhoff sums of piecewise constant observables and the bounded-times construction.

For n < 0 the sum is S_n f(x) = -sum_{j=1}^{-n} f(T^{-j} x), the value forced
by the cocycle relation S_{n+m} = S_n + S_m o T^n.
"""
from dataclasses import dataclass, fields
from math import sqrt

from .cocycle import InductionChain
from .core.scalars import hp_context, is_hp, to_float, to_hp
from .errors import NotBcTime, OrbitSearchOverflow


def observable(T, omega):
    """f_{T,omega} as a function."""
    idx = T.perm.index

    def f(x):
        return omega[idx(T.symbol_at(x))]

    return f


def naive_birkhoff_sum(T, omega, x, n):
    f = observable(T, omega)
    acc = omega[0] * 0
    if n >= 0:
        for _ in range(n):
            acc = acc + f(x)
            x = T(x)
    else:
        for _ in range(-n):
            x = T.inverse(x)
            acc = acc - f(x)
    return acc


def birkhoff_sum(T, omega, x, n, chain=None):
    """S_n f_omega(x); through towers when an InductionChain is supplied."""
    if chain is None:
        return naive_birkhoff_sum(T, omega, x, n)
    return chain.birkhoff(x, n, omega)


def special_birkhoff_sum(T, omega, n, chain=None):
    """Z_{0,n} omega: the sum of f_omega along each full level-n tower."""
    if chain is None:
        chain = InductionChain(T, steps=n)
    return chain.special_sums(omega)[n]


def tower_special_sums(T, omega, n, chain=None):
    """Direct summation S_{q_a} f(base point of a) for every level-n tower (oracle)."""
    if chain is None:
        chain = InductionChain(T, steps=n)
    Tn = chain.maps[n]
    out = []
    for a in Tn.perm.alphabet:
        q = chain.heights[n][Tn.perm.index(a)]
        out.append(naive_birkhoff_sum(T, omega, Tn.top_left(a), q))
    return tuple(out)


def norm2(v):
    if any(is_hp(x) for x in v):
        ctx = next(x for x in v if is_hp(x)).context
        return ctx.sqrt(ctx.fsum(to_hp(x, ctx) ** 2 for x in v))
    return sqrt(sum(to_float(x) ** 2 for x in v))


@dataclass
class BoundedTimesWitness:
    x: object
    k: int
    n_k: int
    rv_k: int
    rv_plus: int
    m_minus: int
    m_plus: int
    alpha: object
    i: int
    beta: object
    beta_minus: object
    beta_plus: object
    j: int
    j_minus: int
    j_plus: int
    pieces_plus: int
    pieces_minus: int
    s_plus: float
    s_minus: float
    bound: float
    bound_norm: float
    membership: bool
    decomposition_ok: bool
    holds: bool
    holds_norm: bool

    def to_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["x"] = str(self.x) if not is_hp(self.x) else float(self.x)
        return d


def _pieces(chain, rk, rp, z, max_pieces):
    """Level-rk subtowers (symbol, offset) stacked in the level-rp tower over base point z."""
    Tk, Tp = chain.maps[rk], chain.maps[rp]
    qk = chain.heights[rk]
    idx = Tk.perm.index
    out = []
    off = 0
    w = z
    while True:
        s = Tk.symbol_at(w)
        out.append((s, off))
        off += qk[idx(s)]
        w = Tk(w)
        if w < Tp.total:
            return out, off
        if len(out) > max_pieces:
            raise OrbitSearchOverflow(f"more than {max_pieces} subtowers in one tower")


def bounded_times(chain, x, k, bc, omega, sums=None, max_pieces=10**6):
    """Times m_{-k} < 0 < m_k returning x to its floor of the level-n_k tower.

    ``bc`` provides ``rv_times`` (pairs of RV indices for n_k and n_k + N),
    ``zorich_times``, ``K`` (max block entry), ``K_norm`` (max block row sum)
    and ``V``.  Both memberships and the decomposition of the sums into
    special sums are re-verified on the spot.
    """
    rk, rp = bc.rv_times[k]
    if rp > chain.depth:
        raise NotBcTime(f"chain depth {chain.depth} below {rp}")
    Z = chain.accumulate(rk, rp)
    if not Z.is_positive():
        raise NotBcTime(f"block Z[{rk},{rp}] is not positive")
    if sums is None:
        sums = chain.special_sums(omega)
    Tk, Tp = chain.maps[rk], chain.maps[rp]
    idxk = Tk.perm.index
    qk, qp = chain.heights[rk], chain.heights[rp]
    alpha, i, _ = chain.locate(x, rk)
    beta, j, b = chain.locate(x, rp)

    own, h = _pieces(chain, rk, rp, b, max_pieces)
    assert h == qp[Tp.perm.index(beta)]
    pos = next(n for n, (s, off) in enumerate(own) if off <= j < off + qk[idxk(s)])
    if own[pos][0] != alpha or j - own[pos][1] != i:
        raise AssertionError("nested towers disagree on the floor of x")

    # forward: first alpha-subtower of the next tower
    b_plus = Tp(b)
    beta_plus = Tp.symbol_at(b_plus)
    nxt, _ = _pieces(chain, rk, rp, b_plus, max_pieces)
    t_pos = next((n for n, (s, _) in enumerate(nxt) if s == alpha), None)
    if t_pos is None:
        raise NotBcTime("next tower contains no subtower of the required symbol")
    j_plus = qp[Tp.perm.index(beta)] - j + nxt[t_pos][1]
    m_plus = j_plus + i
    count_plus = (len(own) - pos - 1) + t_pos

    # backward: last alpha-subtower of the previous tower
    b_minus = Tp.inverse(b)
    beta_minus = Tp.symbol_at(b_minus)
    prv, h_minus = _pieces(chain, rk, rp, b_minus, max_pieces)
    t_last = max((n for n, (s, _) in enumerate(prv) if s == alpha), default=None)
    if t_last is None:
        raise NotBcTime("previous tower contains no subtower of the required symbol")
    j_minus = h_minus - prv[t_last][1] + j
    m_minus = -j_minus + i
    count_minus = (len(prv) - t_last - 1) + pos

    s_plus = chain.birkhoff(x, m_plus, omega, sums=sums)
    s_minus = chain.birkhoff(x, m_minus, omega, sums=sums)

    # membership: both returns sit on floor i of an alpha-tower at level rk
    member = True
    for m in (m_plus, m_minus):
        y = chain.iterate(x, m)
        a2, i2, _ = chain.locate(y, rk)
        member = member and a2 == alpha and i2 == i

    # decomposition into level-rk special sums
    w = sums[rk]
    dec_plus = w[idxk(alpha)]
    for s, _ in own[pos + 1:]:
        dec_plus = dec_plus + w[idxk(s)]
    for s, _ in nxt[:t_pos]:
        dec_plus = dec_plus + w[idxk(s)]
    dec_minus = w[idxk(alpha)]
    for s, _ in prv[t_last + 1:]:
        dec_minus = dec_minus + w[idxk(s)]
    for s, _ in own[:pos]:
        dec_minus = dec_minus + w[idxk(s)]
    dec_minus = -dec_minus
    ok = _close(dec_plus, s_plus) and _close(dec_minus, s_minus)

    nrm = float(norm2(omega))
    bound = (2 * bc.K + 1) * float(bc.V) * nrm
    bound_norm = (2 * bc.K_norm + 1) * float(bc.V) * nrm
    sp, sm = float(to_float(s_plus)), float(to_float(s_minus))
    zt = bc.zorich_times[k] if getattr(bc, "zorich_times", None) else None
    return BoundedTimesWitness(
        x=x, k=k, n_k=zt, rv_k=rk, rv_plus=rp, m_minus=m_minus, m_plus=m_plus,
        alpha=alpha, i=i, beta=beta, beta_minus=beta_minus, beta_plus=beta_plus,
        j=j, j_minus=j_minus, j_plus=j_plus, pieces_plus=count_plus + 1, pieces_minus=count_minus + 1,
        s_plus=sp, s_minus=sm, bound=bound, bound_norm=bound_norm,
        membership=member, decomposition_ok=ok,
        holds=member and ok and abs(sp) <= bound and abs(sm) <= bound,
        holds_norm=member and ok and abs(sp) <= bound_norm and abs(sm) <= bound_norm,
    )


def _close(a, b):
    if is_hp(a) or is_hp(b):
        ctx = (a if is_hp(a) else b).context
        a, b = to_hp(a, ctx), to_hp(b, ctx)
        return abs(a - b) <= ctx.ldexp(1, -(ctx.prec // 2)) * (1 + abs(a))
    return a == b


@dataclass
class WanderingSeries:
    forward: list
    backward: list
    forward_terms: list
    backward_terms: list
    candidate: bool
    note: str

    def rows(self):
        out = []
        for n, (t, s) in enumerate(zip(self.forward_terms, self.forward), start=1):
            out.append((n, t, s))
        for n, (t, s) in enumerate(zip(self.backward_terms, self.backward)):
            out.append((-n, t, s))
        return out


def _geometric_tail(terms, floor_value=1e-30, window=50):
    """Summands below ``floor_value`` with a monotone geometric fit over the last ``window`` terms."""
    if len(terms) < window:
        return False
    tail = terms[-window:]
    if not tail[-1] < floor_value:
        return False
    for a, b in zip(tail, tail[1:]):
        if b > a:
            return False
    return True


def wandering_series(T, omega, x, N, ctx=None):
    """Partial sums of exp(S_n f_omega(x)) for n = 1..N and n = 0..-N (naive orbit)."""
    ctx = ctx or (T.ctx if hasattr(T, "ctx") else hp_context(128))
    f = observable(T, omega)
    fw_terms, fw = [], []
    s = ctx.mpf(0)
    acc = ctx.mpf(0)
    y = x
    for _ in range(N):
        s += to_hp(f(y), ctx)
        y = T(y)
        t = ctx.exp(s)
        acc += t
        fw_terms.append(t)
        fw.append(acc)
    bw_terms, bw = [ctx.mpf(1)], [ctx.mpf(1)]
    s = ctx.mpf(0)
    acc = ctx.mpf(1)
    y = x
    for _ in range(N):
        y = T.inverse(y)
        s -= to_hp(f(y), ctx)
        t = ctx.exp(s)
        acc += t
        bw_terms.append(t)
        bw.append(acc)
    cand = _geometric_tail(fw_terms) and _geometric_tail(bw_terms)
    note = "both tails decay geometrically below 1e-30" if cand else "no wandering-interval candidate"
    return WanderingSeries(fw, bw, fw_terms, bw_terms, cand, note)


def certified_lower_sums(witnesses, ctx=None):
    """Running sums of exp(S_{m_k}) over certified times: lower bounds for both series.

    Each certified term is at least exp(-bound), so the sums grow at least
    linearly in the number of certified times.
    """
    ctx = ctx or hp_context(64)
    fw, bw = [], []
    a = b = ctx.mpf(0)
    for w in witnesses:
        a += ctx.exp(w.s_plus)
        b += ctx.exp(w.s_minus)
        fw.append(float(a))
        bw.append(float(b))
    return fw, bw
