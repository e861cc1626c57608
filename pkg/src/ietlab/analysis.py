"""BC / HS condition checkers, the semi-conjugacy h_n and singularity diagnostics."""
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .cocycle import InductionChain, accumulate
from .core.maps import Iet
from .core.scalars import all_exact, hp_context, is_hp, to_float, to_hp
from .errors import NoneFound, PathMismatch
from .rauzy import DEFAULT_GUARD_BITS
from .spectrum import central_stable_space, periodic_spaces, recast, restricted_norm


# -- Bounded Central condition ------------------------------------------------


@dataclass
class BcWitness:
    zorich_times: list  # n_k, counted in Zorich steps
    rv_times: list  # (RV index of n_k, RV index of n_k + N)
    N: int
    K: int  # max entry over the blocks
    K_norm: int  # max row sum over the blocks
    V: float
    norms: list  # ||Z_{0,n_k} | E_cs|| per time
    ecs: object = None  # Subspace used for item (ii)
    source: str = "estimate"
    report: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "zorich_times": self.zorich_times,
            "rv_times": [list(p) for p in self.rv_times],
            "N": self.N,
            "K": self.K,
            "K_norm": self.K_norm,
            "V": float(self.V),
            "norms": [float(v) for v in self.norms],
            "ecs_source": self.source,
            "ecs_basis": [[float(x) for x in v] for v in self.ecs.vectors()] if self.ecs is not None else None,
            "report": self.report,
        }


def _positive_blocks(chain, zt, N):
    out = []
    for k in range(len(zt) - N):
        Z = chain.accumulate(zt[k], zt[k + N])
        if Z.is_positive():
            out.append((k, Z))
    return out


def check_bc(T0, max_steps, N=None, min_times=3, ecs=None, max_N=None, guard_bits=DEFAULT_GUARD_BITS,
             chain=None, ecs_extra=None, times=None):
    """Scan Zorich times n <= max_steps for positive blocks Z_{n, n+N} and bounded E_cs norms.

    ``times`` restricts the scan to the given Zorich times (e.g. multiples of
    a period).  Without ``ecs`` the central-stable space is estimated from a
    chain ``ecs_extra`` Zorich steps deeper than the scan.
    """
    extra = max_steps // 2 + 20 if ecs_extra is None else ecs_extra
    if chain is None:
        chain = InductionChain(T0, zorich=max_steps + (0 if ecs is not None else extra), guard_bits=guard_bits)
    zt = chain.zorich_times()
    scan = zt[: max_steps + 1]
    if len(scan) < 2:
        raise NoneFound("no complete Zorich step")
    found = None
    candidates = [N] if N is not None else range(1, (max_N or len(scan) - 1) + 1)
    for n_len in candidates:
        blocks = _positive_blocks(chain, scan, n_len)
        if times is not None:
            blocks = [(k, Z) for k, Z in blocks if k in times]
        if len(blocks) >= min_times:
            found = (n_len, blocks)
            break
    if found is None:
        raise NoneFound(f"fewer than {min_times} positive blocks within {max_steps} Zorich steps")
    n_len, blocks = found
    report = {}
    if ecs is None:
        sub = central_stable_space(chain, len(zt) - 1, guard_bits=guard_bits)
        source = "estimate"
        report = {k: v for k, v in sub.report.items()}
    else:
        sub = ecs
        source = "exact" if sub.report.get("source") == "exact" else "supplied"
    norms = []
    for k, _ in blocks:
        Z0 = chain.accumulate(0, zt[k])
        norms.append(float(restricted_norm(Z0, sub)))
    K = max(Z.max_entry() for _, Z in blocks)
    K_norm = max(max(Z.row_sums()) for _, Z in blocks)
    return [BcWitness(
        zorich_times=[k for k, _ in blocks],
        rv_times=[(zt[k], zt[k + n_len]) for k, _ in blocks],
        N=n_len, K=K, K_norm=K_norm, V=max(norms), norms=norms,
        ecs=sub, source=source, report=report,
    )]


def verify_bc(T0, w, guard_bits=DEFAULT_GUARD_BITS):
    """Recompute every block and norm of ``w`` from a fresh induction (Gram-matrix norms)."""
    last = max(b for _, b in w.rv_times)
    path = InductionChain(T0, steps=last, guard_bits=guard_bits).path()
    ok = True
    for (a, b), nk in zip(w.rv_times, w.zorich_times):
        Z = accumulate(path, a, b)
        ok = ok and all(1 <= v <= w.K for r in Z.rows for v in r)
        ok = ok and max(Z.row_sums()) <= w.K_norm
        # ||Z B|| from the top eigenvalue of B^T Z^T Z B
        Z0 = accumulate(path, 0, a)
        ctx = w.ecs.ctx
        B = recast(ctx, w.ecs.basis)
        M = ctx.matrix([[ctx.mpf(v) for v in r] for r in Z0.rows]) * B
        G = M.T * M
        ev = ctx.eigsy(G)[0]
        nrm = ctx.sqrt(max(ev[i] for i in range(G.rows)))
        ok = ok and float(nrm) <= w.V * (1 + 1e-9)
    return ok


def bc_periodic(inst, periods, min_times=3, ctx=None):
    """BC witness for a periodic-type instance: n_k = k p, N = p, exact E_cs."""
    ctx = ctx or hp_context(256)
    T0 = inst.iet()
    chain = InductionChain(T0, steps=inst.period * (periods + 1))
    _, Ecs = periodic_spaces(inst, ctx)
    zt = chain.zorich_times()
    per = [k for k, r in enumerate(zt) if r % inst.period == 0 and r < inst.period * (periods + 1)]
    n_len = per[1] - per[0]
    return check_bc(T0, len(zt) - 1, N=n_len, min_times=min_times, ecs=Ecs, chain=chain, times=set(per)), chain


# -- High Singularities condition -----------------------------------------------


@dataclass
class HsWitness:
    zorich_times: list
    rv_times: list
    C: float
    balances: list
    horizons: list  # verified continuity horizon per time
    max_quarter: list  # floor(max q / 4)
    min_quarter: list  # floor(min q / 4)
    which: list  # "max" or "min": the quarter horizon that held

    def to_dict(self):
        return {
            "zorich_times": self.zorich_times,
            "rv_times": self.rv_times,
            "C": self.C,
            "balances": self.balances,
            "horizons": [str(h) for h in self.horizons],
            "max_quarter": [str(h) for h in self.max_quarter],
            "min_quarter": [str(h) for h in self.min_quarter],
            "horizon_held": self.which,
        }


def continuity_horizon(chain, n):
    """Largest H with T^i continuous on I^(n) for all 0 <= i <= H.

    H = min over singularities s of the first j >= 0 with T^{-j}(s) in the
    interior of I^(n), read off from the tower coordinates of s.
    """
    T = chain.maps[0]
    Tn = chain.maps[n]
    q = chain.heights[n]
    best = None
    for s in T.singularities():
        _, j, y = chain.locate(s, n)
        while not y > 0:
            # the base point is the left end of I^(n): step back one more tower
            y = Tn.inverse(y)
            j += q[Tn.perm.index(Tn.symbol_at(y))]
        best = j if best is None else min(best, j)
    return best


def check_hs(T0, max_steps, C=4.0, min_times=3, guard_bits=DEFAULT_GUARD_BITS, chain=None):
    """Zorich times n <= max_steps with balanced heights and continuity up to the quarter horizon."""
    if chain is None:
        chain = InductionChain(T0, zorich=max_steps, guard_bits=guard_bits)
    zt = chain.zorich_times()[1: max_steps + 1]
    times, rv, bal, hor, mxq, mnq, which = [], [], [], [], [], [], []
    for k, r in enumerate(zt, start=1):
        q = chain.heights[r]
        b = max(q) / min(q)
        if not b < C:
            continue
        H = continuity_horizon(chain, r)
        hi, lo = max(q) // 4, min(q) // 4
        if H >= hi:
            held = "max"
        elif H >= lo:
            held = "min"
        else:
            continue
        times.append(k)
        rv.append(r)
        bal.append(b)
        hor.append(H)
        mxq.append(hi)
        mnq.append(lo)
        which.append(held)
    if len(times) < min_times:
        raise NoneFound(f"fewer than {min_times} HS times within {max_steps} Zorich steps")
    return [HsWitness(times, rv, C, bal, hor, mxq, mnq, which)]


def verify_hs(T0, w, guard_bits=DEFAULT_GUARD_BITS, naive_cap=256):
    """Independent check: heights from the incidence product, horizons by orbit evaluation.

    The first min(H, naive_cap) backward iterates of every singularity are
    checked to stay outside the interior of I^(n) by direct iteration, and
    T^{-H}(s) is checked to enter it through the tower walk.
    """
    last = max(w.rv_times)
    chain = InductionChain(T0, steps=last, guard_bits=guard_bits)
    path = chain.path()
    T = chain.maps[0]
    ok = True
    for r, b, H, held in zip(w.rv_times, w.balances, w.horizons, w.which):
        Z = accumulate(path, 0, r)
        q = Z.row_sums()
        ok = ok and tuple(q) == tuple(chain.heights[r]) and max(q) / min(q) == b and b < w.C
        need = max(q) // 4 if held == "max" else min(q) // 4
        ok = ok and H >= need
        L = chain.maps[r].total
        hits = []
        for s in T.singularities():
            y = s
            for _ in range(min(H, naive_cap)):
                if 0 < y < L:
                    ok = False
                    break
                y = T.inverse(y)
            z = chain.iterate(s, -H) if H else s
            hits.append(0 < z < L)
        ok = ok and any(hits)
    return ok


# -- semi-conjugacy and the invariant measure -------------------------------------


@dataclass
class ConjugacySample:
    level: int
    xs: list  # left endpoints of the T-floors (sorted)
    hs: list  # left endpoints of the matching T0-floors
    widths: list  # T-floor widths
    widths0: list  # T0-floor widths
    labels: list  # (symbol, floor index)
    defect: float
    mesh: float
    sample_defect: float = 0.0

    @property
    def slopes(self):
        return [to_float(b) / to_float(a) for a, b in zip(self.widths, self.widths0)]

    def h(self, x):
        k = max(bisect_right(self.xs, x) - 1, 0)
        return self.hs[k] + (x - self.xs[k]) * (self.widths0[k] / self.widths[k])

    def rows(self):
        return [(float(to_float(x)), float(to_float(y)), s) for x, y, s in zip(self.xs, self.hs, self.slopes)]

    def nondecreasing(self):
        return all(a <= b for a, b in zip(self.hs, self.hs[1:]))


def _check_paths(chT, ch0, n):
    for k in range(n):
        a, b = chT.moves[k], ch0.moves[k]
        if a.type != b.type or a.source != b.source:
            raise PathMismatch(f"rotation numbers differ at step {k}")


def semi_conjugacy(T, T0, n, guard_bits=DEFAULT_GUARD_BITS, chains=None, samples=200, seed=0, bits=256):
    """h_n: level-n floors of T mapped affinely onto the matching floors of T0.

    When the two maps use different arithmetic everything is carried out
    in ``bits``-bit floating point (T0 converted once).
    """
    chT, ch0 = chains if chains is not None else (
        InductionChain(T, steps=n, guard_bits=guard_bits), InductionChain(T0, steps=n, guard_bits=guard_bits))
    _check_paths(chT, ch0, n)
    P = chT.partition(n)
    mixed = not all_exact(T.lengths) and all_exact(T0.lengths)
    conv = None
    T0x = T0
    if mixed:
        ctx = T.ctx if hasattr(T, "ctx") else hp_context(bits)

        def conv(v):
            return v if is_hp(v) else to_hp(v, ctx)

        # floors of T0 in floating point: converting exact floors one by one is far slower
        T0x = Iet(T0.perm, [conv(v) for v in T0.lengths], check=False)
        P0 = InductionChain(T0x, steps=n, guard_bits=guard_bits).partition(n)
    else:
        P0 = ch0.partition(n)
    key0 = {(a, j): (left, w) for a, j, left, w in P0.floors}
    xs, hs, ws, w0s, labels = [], [], [], [], []
    for a, j, left, w in P.floors:
        l0, v0 = key0[(a, j)]
        if conv is not None:
            left, w = conv(left), conv(w)
        xs.append(left)
        hs.append(l0)
        ws.append(w)
        w0s.append(v0)
        labels.append((a, j))
    S = ConjugacySample(n, xs, hs, ws, w0s, labels, 0.0, float(to_float(P0.mesh())))
    if not S.nondecreasing():
        raise PathMismatch("floor orders differ")
    S.defect = _top_floor_defect(S, T, T0x, chT.heights[n], chT.maps[n])
    S.sample_defect = _sample_defect(S, T, T0x, samples, seed)
    return S


def _top_floor_defect(S, T, T0, q, Tn):
    """sup |h(T x) - T0(h x)| over top floors, the only floors where it can be non-zero.

    h is continuous and on a top floor both sides are affine between the
    preimages of the base-floor endpoints, so the sup is attained there or
    as the left limit at the right end of the floor.
    """
    flat = not hasattr(T, "slope") or T.is_flat()
    base_pts = sorted(x for x, (a, j) in zip(S.xs, S.labels) if j == 0)

    def h(y):
        return T0.total if not y < T.total else S.h(y)

    worst = 0.0
    for k, (a, j) in enumerate(S.labels):
        if j != q[Tn.perm.index(a)] - 1:
            continue
        x0, w = S.xs[k], S.widths[k]
        sl = 1 if flat else T.slope(T.symbol_at(x0 + w / 2))
        lo = _branch(T, x0, x0 + w / 2)
        hi = lo + sl * w
        t0 = _branch(T0, S.hs[k], S.hs[k] + S.widths0[k] / 2)
        for y in [lo] + [b for b in base_pts if lo < b < hi]:
            x = x0 + (y - lo) / sl
            worst = max(worst, abs(to_float(h(y)) - to_float(t0 + (x - x0) * (S.widths0[k] / w))))
        worst = max(worst, abs(to_float(h(hi)) - to_float(t0 + S.widths0[k])))
    return worst


def _branch(T, x, mid):
    """Image of x under the branch of T containing ``mid`` (x may be a discontinuity)."""
    a = T.symbol_at(mid)
    if hasattr(T, "slope") and not T.is_flat():
        return T.bottom_left(a) + T.slope(a) * (x - T.top_left(a))
    return x - T.top_left(a) + T.bottom_left(a)


def _sample_defect(S, T, T0, samples, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    total = to_float(T.total)
    for u in rng.random(samples):
        x = u * total
        if is_hp(T.total):
            x = to_hp(x, T.total.context)
        else:
            from fractions import Fraction
            x = Fraction(x) * T.total / Fraction(total)
        if not x < T.total:
            continue
        d = abs(to_float(S.h(T(x))) - to_float(T0(S.h(x))))
        worst = max(worst, d)
    return worst


def derivative_profile(S, thresholds=(0.1, 0.01)):
    """Per threshold eps: Lebesgue mass of {slope < eps} and image mass of {slope > 1/eps}."""
    sl = S.slopes
    ws = [to_float(w) for w in S.widths]
    w0 = [to_float(w) for w in S.widths0]
    tot, tot0 = sum(ws), sum(w0)
    out = {}
    for eps in thresholds:
        small = sum(w for w, s in zip(ws, sl) if s < eps) / tot
        big = sum(w for w, s in zip(w0, sl) if s > 1 / eps) / tot0
        out[eps] = {"mass_slope_below": small, "image_mass_slope_above": big}
    return {"level": S.level, "cells": len(sl), "profile": out,
            "min_slope": min(sl), "max_slope": max(sl), "total_variation": sum(w0)}


def invariant_measure_estimate(S, T=None, orbit=0, seed=0):
    """mu of each level-n T0-cell: the Lebesgue length of the matching T-cell.

    With ``orbit`` > 0 the masses are cross-checked against visit frequencies
    of a T-orbit of that length; the reported discrepancy is the max over
    cells of |frequency - mass|.
    """
    masses = [to_float(w) for w in S.widths]
    tot = sum(masses)
    masses = [m / tot for m in masses]
    out = {"level": S.level, "masses": masses, "sum": sum(masses),
           "max_over_min": max(masses) / min(masses),
           "t0_max_over_min": max(to_float(w) for w in S.widths0) / min(to_float(w) for w in S.widths0)}
    if orbit and T is not None:
        counts = [0] * len(masses)
        x = to_hp(0.5, T.ctx) * T.total if hasattr(T, "ctx") and not T.is_flat() else T.total / 2
        for _ in range(orbit):
            counts[bisect_right(S.xs, x) - 1] += 1
            x = T(x)
        freq = [c / orbit for c in counts]
        out["orbit_discrepancy"] = max(abs(f - m) for f, m in zip(freq, masses))
        out["orbit_scale"] = orbit ** -0.5
    return out
