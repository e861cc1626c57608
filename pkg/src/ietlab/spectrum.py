"""Omega_pi, genus, Lyapunov exponents and Oseledets subspaces of the height cocycle.

The height cocycle acts on observables omega by omega -> Z_{0,n} omega
(Z the incidence matrix, see ``cocycle``).  E_s is spanned by the g most
contracted right singular directions of Z_{0,n}; E_cs is the orthogonal
complement of the g most contracted directions F_s of the length cocycle
(Z_{0,n}^T)^{-1}.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import log, sqrt

import numpy as np

from .cocycle import InductionChain
from .core.maps import Iet
from .core.scalars import all_exact, hp_context, to_hp
from .errors import Connection, PrecisionExhausted, SpectralGapNotResolved
from .linalg import (
    bits_needed, columns, containment_gap, int_inverse, integer_vector, mp_matrix,
    nullspace, orth_complement, orthonormalize, principal_angles, svd,
)
from .rauzy import DEFAULT_GUARD_BITS, RVKernel


def omega_matrix(perm):
    """Antisymmetric matrix: +1 where alpha precedes beta on top and follows it below."""
    alph = perm.alphabet
    d = len(alph)
    out = [[0] * d for _ in range(d)]
    for i, a in enumerate(alph):
        for j, b in enumerate(alph):
            if perm.pi1(a) > perm.pi1(b) and perm.pi0(a) < perm.pi0(b):
                out[i][j] = 1
            elif perm.pi1(a) < perm.pi1(b) and perm.pi0(a) > perm.pi0(b):
                out[i][j] = -1
    return out


def kernel_and_genus(perm):
    """(integer kernel basis of Omega_pi, g) with 2g = d - dim ker."""
    Om = omega_matrix(perm)
    ker = nullspace([[Fraction(v) for v in r] for r in Om])
    d = perm.d
    twice = d - len(ker)
    if twice % 2:
        raise ArithmeticError("rank of an antisymmetric matrix must be even")
    return [integer_vector(v) for v in ker], twice // 2


@dataclass
class LyapunovEstimate:
    exponents: list
    steps: int
    seed: int
    rv_steps: int
    running: list = field(default_factory=list)
    increments_std: list = field(default_factory=list)
    convergence_gap: float = 0.0
    threshold: float = 0.0
    central_count: int = 0
    shadow_steps: object = None

    def to_dict(self):
        return {
            "exponents": self.exponents,
            "zorich_steps": self.steps,
            "rv_steps": self.rv_steps,
            "seed": self.seed,
            "convergence_gap": self.convergence_gap,
            "central_threshold": self.threshold,
            "central_count": self.central_count,
            "shadow_steps": self.shadow_steps,
        }


def central_threshold(n):
    return 3.0 / sqrt(n)


def lyapunov_spectrum(T, n_steps, precision=None, seed=0, guard_bits=DEFAULT_GUARD_BITS, record_every=1):
    """QR estimate of all exponents of the height cocycle, per Zorich step.

    Lengths are renormalized as the induction proceeds; mpf lengths are
    first converted to ``precision`` bits when given.  A guarded tie is
    reported as PrecisionExhausted, an exact tie as Connection.
    """
    if precision is not None and not all_exact(T.lengths):
        ctx = hp_context(precision)
        T = Iet(T.perm, [to_hp(v, ctx) for v in T.lengths], check=False)
    kern = RVKernel(T, guard_bits, renormalize=True)
    d = T.perm.d
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    logs = np.zeros(d)
    incr = []
    running = []
    rv = 0
    try:
        for k in range(n_steps):
            for _, w, l in kern.zorich_step():
                Q[l] += Q[w]
                rv += 1
            Q, R = np.linalg.qr(Q)
            diag = np.abs(np.diag(R))
            # keep the frame orientation deterministic
            sgn = np.sign(np.diag(R))
            sgn[sgn == 0] = 1
            Q = Q * sgn
            inc = np.log(diag)
            logs += inc
            incr.append(inc)
            if record_every and (k + 1) % record_every == 0:
                running.append((k + 1, (logs / (k + 1)).tolist()))
    except Connection as e:
        if e.guarded:
            raise PrecisionExhausted(f"guarded tie after {k} Zorich steps", step=e.step) from e
        raise
    ex = np.sort(logs / n_steps)[::-1]
    half = None
    for s, vals in running:
        if s >= n_steps // 2:
            half = np.sort(np.array(vals))[::-1]
            break
    gap = float(np.max(np.abs(ex - half))) if half is not None else float("nan")
    inc = np.array(incr)
    thr = central_threshold(n_steps)
    return LyapunovEstimate(
        exponents=[float(v) for v in ex],
        steps=n_steps,
        seed=seed,
        rv_steps=rv,
        running=running,
        increments_std=[float(v) for v in inc.std(axis=0)],
        convergence_gap=gap,
        threshold=thr,
        central_count=int(sum(1 for v in ex if abs(v) < thr)),
        shadow_steps=kern.shadow_steps,
    )


# -- Oseledets subspaces -----------------------------------------------------


@dataclass
class Subspace:
    basis: object  # mpmath matrix with orthonormal columns
    dim: int
    n: int
    ctx: object
    report: dict = field(default_factory=dict)

    def vectors(self):
        return [[self.basis[r, c] for r in range(self.basis.rows)] for c in range(self.dim)]

    def to_dict(self):
        return {
            "dim": self.dim,
            "n": self.n,
            "basis": [[float(x) for x in v] for v in self.vectors()],
            "report": {k: (float(v) if hasattr(v, "real") and not isinstance(v, (int, bool, list)) else v) for k, v in self.report.items()},
        }


def _zorich_matrix(T_or_chain, n, guard_bits):
    if isinstance(T_or_chain, InductionChain):
        chain = T_or_chain
    else:
        chain = InductionChain(T_or_chain, zorich=n, guard_bits=guard_bits)
    times = chain.zorich_times()
    if len(times) <= n:
        raise SpectralGapNotResolved(f"only {len(times) - 1} Zorich steps available")
    return chain, chain.accumulate(0, times[n]), times


def _gap_check(logs_sv, g, n, fluct, kind):
    d = len(logs_sv)
    i = d - g - 1 if kind == "s" else g - 1
    gap = logs_sv[i] - logs_sv[i + 1]
    need = 10.0 * fluct * sqrt(max(n, 1))
    return gap, need


def _fluctuation(chain, seed=0):
    """Largest std of the per-Zorich-step QR log-increments along the chain's own moves."""
    d = len(chain.alphabet)
    zt = chain.zorich_times()
    if len(zt) < 3:
        return 1.0
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    incr = []
    for a, b in zip(zt, zt[1:]):
        for k in range(a, b):
            mv = chain.moves[k]
            idx = chain.maps[k].perm.index
            Q[idx(mv.loser)] += Q[idx(mv.winner)]
        Q, R = np.linalg.qr(Q)
        sgn = np.sign(np.diag(R))
        sgn[sgn == 0] = 1
        Q = Q * sgn
        incr.append(np.log(np.abs(np.diag(R))))
    return float(np.max(np.std(np.array(incr), axis=0)))


def stable_space(T, n, guard_bits=DEFAULT_GUARD_BITS, fluct=None, check_gap=True):
    """E_s estimate from Z_{0,r_n} (r_n the n-th Zorich time)."""
    chain, Z, times = _zorich_matrix(T, n, guard_bits)
    perm = chain.maps[0].perm
    _, g = kernel_and_genus(perm)
    ctx = hp_context(bits_needed(Z.rows))
    _, S, V = svd(ctx, Z.rows)
    d = Z.d
    logs = [float(ctx.log(s)) for s in S]
    if fluct is None:
        fluct = _fluctuation(chain)
    gap, need = _gap_check(logs, g, n, fluct, "s")
    if check_gap and gap <= need:
        raise SpectralGapNotResolved(f"log-gap {gap:.3g} below required {need:.3g} at n={n}")
    basis = columns(ctx, V, list(range(d - g, d)))
    rep = {"log_singular_values": logs, "log_gap": gap, "required_gap": need, "rv_index": times[n]}
    return Subspace(basis, g, n, ctx, rep)


def central_stable_space(T, n, guard_bits=DEFAULT_GUARD_BITS, fluct=None, check_gap=True):
    """E_cs estimate as the orthocomplement of F_s, cross-checked against Z's own singular directions."""
    chain, Z, times = _zorich_matrix(T, n, guard_bits)
    perm = chain.maps[0].perm
    _, g = kernel_and_genus(perm)
    d = Z.d
    ctx = hp_context(bits_needed(Z.rows))
    Linv = [list(r) for r in zip(*int_inverse(Z.rows))]  # (Z^T)^{-1} = (Z^{-1})^T
    _, SL, VL = svd(ctx, Linv)
    Fs = columns(ctx, VL, list(range(d - g, d)))
    Ecs = orth_complement(ctx, Fs)
    _, S, V = svd(ctx, Z.rows)
    logs = [float(ctx.log(s)) for s in S]
    if fluct is None:
        fluct = _fluctuation(chain)
    gap, need = _gap_check(logs, g, n, fluct, "cs")
    if check_gap and gap <= need:
        raise SpectralGapNotResolved(f"log-gap {gap:.3g} below required {need:.3g} at n={n}")
    cross = columns(ctx, V, list(range(g, d)))
    ang = principal_angles(ctx, Ecs, cross)
    rep = {
        "log_singular_values": logs,
        "log_gap": gap,
        "required_gap": need,
        "cross_check_angle": float(max(ang)) if ang else 0.0,
        "rv_index": times[n],
    }
    return Subspace(Ecs, d - g, n, ctx, rep)


def central_vector_periodic(A):
    """Rational basis of ker(A^T - Id) for a loop matrix A."""
    rows = A.T.rows if hasattr(A, "T") else [list(r) for r in zip(*A)]
    d = len(rows)
    M = [[Fraction(rows[i][j] - (1 if i == j else 0)) for j in range(d)] for i in range(d)]
    return [tuple(v) for v in nullspace(M)]


def exact_subspace(vectors, ctx, n=0):
    """Orthonormal Subspace from exact (field or rational) spanning vectors."""
    B = ctx.matrix(len(vectors[0]), len(vectors))
    for c, v in enumerate(vectors):
        for r, x in enumerate(v):
            B[r, c] = to_hp(x, ctx)
    Q = orthonormalize(ctx, B)
    return Subspace(Q, len(vectors), n, ctx, {"source": "exact"})


def periodic_spaces(inst, ctx):
    """Exact E_s and E_cs of a periodic-type instance (stable and unit eigenvectors of M^T)."""
    Es = exact_subspace([inst.stable], ctx)
    vecs = [inst.stable] + ([inst.omega] if inst.omega else [])
    Ecs = exact_subspace(vecs, ctx)
    return Es, Ecs


def restricted_norm(Z, sub, ctx=None):
    """|| Z restricted to span(sub) || in the Euclidean norm."""
    ctx = ctx or sub.ctx
    M = mp_matrix(ctx, Z.rows) * recast(ctx, sub.basis)
    _, S, _ = svd(ctx, M)
    return S[0]


def recast(ctx, M):
    out = ctx.matrix(M.rows, M.cols)
    for r in range(M.rows):
        for c in range(M.cols):
            out[r, c] = ctx.mpf(M[r, c])
    return out


def _common(a, b):
    ctx = a.ctx if a.ctx.prec >= b.ctx.prec else b.ctx
    return ctx, recast(ctx, a.basis), recast(ctx, b.basis)


def subspace_angle(a, b):
    ctx, A, B = _common(a, b)
    return max(principal_angles(ctx, A, B))


def nesting_gap(small, big):
    ctx, A, B = _common(small, big)
    return containment_gap(ctx, A, B)
