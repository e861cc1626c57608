"""Acceptance suite: one test per criterion, at the pinned tolerances.

Run alone with ``pytest tests/test_acceptance.py -v``; the whole file takes
roughly fifteen minutes on one core.
"""
import math
import time
from fractions import Fraction as F
from itertools import product

import mpmath
import numpy as np
import pytest
import sympy

from conftest import first_return
from ietlab.affine import build_aiet, check_compatibility
from ietlab.analysis import (
    bc_periodic, check_bc, check_hs, derivative_profile, semi_conjugacy, verify_bc, verify_hs,
)
from ietlab.birkhoff import (
    bounded_times, certified_lower_sums, naive_birkhoff_sum, norm2, special_birkhoff_sum,
    tower_special_sums, wandering_series,
)
from ietlab.cli import main
from ietlab.cocycle import InductionChain, accumulate
from ietlab.core.permutation import all_irreducible
from ietlab.errors import Connection, NoneFound, PrecisionExhausted
from ietlab.instances import find_periodic_loop, golden_iet, golden_instance
from ietlab.rauzy import rauzy_class, rauzy_classes
from ietlab.sampling import instance_rng, random_hp_iet, random_points, random_rational_iet
from ietlab.spectrum import kernel_and_genus, lyapunov_spectrum, omega_matrix

pytestmark = pytest.mark.slow


def _rational_instances():
    for i in range(100):
        rng = instance_rng(2024, i)
        T = random_rational_iet(rng, 2 + i % 3)
        yield rng, T, InductionChain(T, steps=15, stop_at_connection=True)


# 1 ---------------------------------------------------------------------------

def test_c1_induced_map_is_first_return():
    t0 = time.time()
    mismatches = points = 0
    for rng, T, ch in _rational_instances():
        nn = ch.depth
        if nn == 0:
            continue
        for j in range(1000):
            # half the points at the deepest level, the rest cycle through shallower ones
            n = nn if j % 2 == 0 or nn == 1 else 1 + (j // 2) % (nn - 1)
            Tn = ch.maps[n]
            x = random_points(rng, Tn, 1)[0]
            y, _ = first_return(T, x, Tn.total)
            mismatches += Tn(x) != y
            points += 1
    elapsed = time.time() - t0
    assert points >= 99_000
    assert mismatches == 0
    assert elapsed < 60


# 2 ---------------------------------------------------------------------------

def test_c2_height_and_mass_identities():
    checked = 0
    for rng, T, ch in _rational_instances():
        for n in range(ch.depth + 1):
            q = ch.heights_at(n)
            Z = ch.accumulate(0, n)
            assert q == Z.apply((1,) * T.perm.d)
            lam = ch.lengths(n)
            assert sum(qa * la for qa, la in zip(q, lam)) == T.total
            checked += 1
        # return times to the deepest base equal the tower heights
        n = ch.depth
        Tn = ch.maps[n]
        for a in Tn.perm.alphabet:
            x = Tn.top_left(a) + Tn.length(a) * F(rng.randrange(1, 1000), 1000)
            _, r = first_return(T, x, Tn.total)
            assert r == ch.heights_at(n)[Tn.perm.index(a)]
    assert checked > 100


# 3 ---------------------------------------------------------------------------

def test_c3_golden():
    G = golden_iet()
    ch = InductionChain(G, zorich=50)
    assert len(ch.zorich_lengths()) >= 50
    assert set(ch.zorich_lengths()[:50]) == {1}
    fib = [1, 1]
    while len(fib) < 60:
        fib.append(fib[-1] + fib[-2])
    for r in range(50):
        assert sorted(ch.heights_at(r)) == [fib[r], fib[r + 1]]
    # oracle: period matrix of the golden loop, top eigenvalue by sympy
    P = sympy.Matrix([[2, 1], [1, 1]])
    M = sympy.Matrix(golden_instance().matrix.rows)
    x = sympy.Symbol("x")
    assert M.charpoly(x) == P.charpoly(x)
    top = max(sympy.Poly(P.charpoly(x).as_expr(), x).nroots(n=30))
    want = float(sympy.log(top) / 2)
    assert abs(want - math.log((1 + math.sqrt(5)) / 2)) < 1e-12
    est = lyapunov_spectrum(G, 2000).exponents[0]
    assert abs(est - want) < 0.01 * want


# 4 ---------------------------------------------------------------------------

def test_c4_genus_formula():
    for d in range(2, 7):
        for p in all_irreducible(d):
            ker, g = kernel_and_genus(p)
            assert isinstance(g, int)
            rank = sympy.Matrix(omega_matrix(p)).rank()
            assert 2 * g == rank == d - len(ker)
    for d in range(2, 7):
        for c, (rep, _) in enumerate(rauzy_classes(d)):
            members, _ = rauzy_class(rep)
            _, g = kernel_and_genus(rep)
            for i in range(20):
                rng = instance_rng(4000 + 10 * d + c, i)
                p = members[rng.randrange(len(members))]
                est = lyapunov_spectrum(random_hp_iet(rng, d, p), 10**4, precision=128)
                assert est.central_count == d - 2 * g, (d, c, i, est.exponents)


# 5 ---------------------------------------------------------------------------

def _loop_oracle(start, max_len=12):
    """Exhaustive search: shortest positive Zorich-aligned loop with eigenvalue 1."""
    alphabet = start.alphabet
    for p in range(2, max_len + 1):
        for types in product((0, 1), repeat=p):
            if types[0] == types[-1]:
                continue
            perm = start
            M = sympy.eye(len(alphabet))
            for t in types:
                # type 0: the top-last interval wins against the bottom-last one
                w, l = (perm.top[-1], perm.bottom[-1]) if t == 0 else (perm.bottom[-1], perm.top[-1])
                B = sympy.eye(len(alphabet))
                B[alphabet.index(w), alphabet.index(l)] = 1
                M = M * B
                perm = perm.rauzy(t)
            if perm != start or not all(v > 0 for v in M):
                continue
            if M.charpoly().eval(1) == 0:
                return list(types), M
    return None, None


def test_c5_periodic_end_to_end():
    t0 = time.time()
    inst = find_periodic_loop()
    types, M = _loop_oracle(inst.loop.start)
    assert inst.types == types
    assert sympy.Matrix(inst.matrix.rows) == M
    T0 = inst.iet()
    omega = inst.omega
    p = inst.period

    # (a)
    assert abs(float(sum((w * v for w, v in zip(omega, T0.lengths)), T0.lengths[0] * 0))) <= 1e-12
    assert check_compatibility(T0, omega) == 0
    # (b)
    path = inst.repeated(50)
    for k in range(51):
        assert accumulate(path, 0, k * p).apply(omega) == tuple(omega)

    # (c) constants from the loop matrix, norms by numpy
    ws, chain0 = bc_periodic(inst, 8)
    bc = ws[0]
    assert [a for a, _ in bc.rv_times] == [k * p for k in range(len(bc.rv_times))]
    assert bc.K == max(max(r) for r in inst.matrix.rows)
    Mf = np.array(inst.matrix.rows, dtype=float)
    Q, _ = np.linalg.qr(np.array([[float(v) for v in inst.stable], [float(v) for v in omega]]).T)
    norms = [np.linalg.norm(np.linalg.matrix_power(Mf.T, k) @ Q, 2) for k in range(len(bc.rv_times))]
    assert abs(bc.V - max(norms)) <= 1e-9 * max(norms)
    assert verify_bc(T0, bc)

    # (d)
    levels = 6
    need = max(bc.rv_times[-1][1], p * levels) + 2 * p
    res = build_aiet(inst.repeated(200), omega, depth=need, T0=T0)
    assert res.gap < 1e-8
    T = res.aiet

    # (e) 100 AIET points and 10 points of T0
    bound = (2 * bc.K + 1) * bc.V * norm2([float(v) for v in omega])
    rng = instance_rng(5, 0)
    chain = InductionChain(T, steps=bc.rv_times[-1][1])
    sums = chain.special_sums(T.omega)
    sums0 = chain0.special_sums(omega)
    cases = [(chain, x, T.omega, sums) for x in random_points(rng, T, 100)]
    cases += [(chain0, x, omega, sums0) for x in random_points(rng, T0, 10)]
    for ch, x, om, sm in cases:
        w = bounded_times(ch, x, rng.randrange(len(bc.rv_times)), bc, om, sums=sm)
        assert abs(w.bound - bound) <= 1e-9 * bound
        assert w.membership and w.decomposition_ok and w.holds
        assert w.m_minus < 0 < w.m_plus
        assert abs(w.s_plus) <= bound and abs(w.s_minus) <= bound

    # (f)
    x = random_points(rng, T, 1)[0]
    along = [bounded_times(chain, x, k, bc, T.omega, sums=sums) for k in range(len(bc.rv_times))]
    fw, bw = certified_lower_sums(along)
    floor = math.exp(-bound)
    for k, (a, b) in enumerate(zip(fw, bw)):
        assert a >= (k + 1) * floor and b >= (k + 1) * floor
    assert not wandering_series(T, T.omega, x, 2000).candidate

    # (g) and (h)
    chT = InductionChain(T, steps=p * levels)
    ch0 = InductionChain(T0, steps=p * levels)
    masses = []
    for k in range(1, levels + 1):
        S = semi_conjugacy(T, T0, p * k, chains=(chT, ch0), seed=5)
        assert S.nondecreasing()
        assert S.defect <= S.mesh
        # h T = T0 h at sampled points, up to the level-n resolution
        assert S.sample_defect <= S.defect + 1e-30
        masses.append(derivative_profile(S)["profile"][0.1]["mass_slope_below"])
    last = masses[-5:]
    assert all(a < b for a, b in zip(last, last[1:])), masses
    assert time.time() - t0 < 600


# 6 ---------------------------------------------------------------------------

def test_c6_bc_hs_genericity():
    bc_found = hs_found = 0
    for i in range(100):
        T = random_hp_iet(instance_rng(6, i), 3)
        try:
            w = check_bc(T, 200)[0]
        except (NoneFound, PrecisionExhausted, Connection):
            w = None
        if w is not None:
            assert verify_bc(T, w)
            bc_found += 1
        try:
            h = check_hs(T, 200, C=4.0)[0]
        except (NoneFound, PrecisionExhausted, Connection):
            h = None
        if h is not None:
            assert verify_hs(T, h)
            hs_found += 1
    assert bc_found >= 90 and hs_found >= 90, (bc_found, hs_found)


# 7 ---------------------------------------------------------------------------

def test_c7_birkhoff_machinery():
    # exact cocycle relation on 10^3 triples, tower sums on rational instances
    rng = instance_rng(7, 0)
    insts = []
    for i in range(20):
        T = random_rational_iet(instance_rng(7, 1 + i), 2 + i % 3)
        ch = InductionChain(T, steps=15, stop_at_connection=True)
        om = tuple(F(rng.randrange(-9, 10)) for _ in range(T.perm.d))
        insts.append((T, ch, om, ch.special_sums(om)))
    for j in range(1000):
        T, ch, om, sums = insts[j % len(insts)]
        x = random_points(rng, T, 1)[0]
        n = rng.randrange(-10**4, 10**4 + 1)
        m = rng.randrange(-10**4, 10**4 + 1)
        Tnx = ch.iterate(x, n)
        lhs = ch.birkhoff(x, n + m, om, sums=sums)
        assert lhs == ch.birkhoff(x, n, om, sums=sums) + ch.birkhoff(Tnx, m, om, sums=sums)
        if j % 50 == 0:
            # naive subset with small times
            a, b = n % 200 - 100, m % 200 - 100
            y = x
            for _ in range(abs(a)):
                y = T(y) if a > 0 else T.inverse(y)
            assert naive_birkhoff_sum(T, om, x, a + b) == \
                naive_birkhoff_sum(T, om, x, a) + naive_birkhoff_sum(T, om, y, b)

    # special sums equal Z_{0,n} omega
    for T, ch, om, sums in insts:
        for n in range(ch.depth + 1):
            want = ch.accumulate(0, n).apply(om)
            assert special_birkhoff_sum(T, om, n, chain=ch) == want
        assert tower_special_sums(T, om, ch.depth, chain=ch) == sums[ch.depth]

    # towers against naive iteration for |n| <= 10^4; dyadic lengths keep mpf sums exact
    for i in range(10):
        r = instance_rng(70, i)
        T = random_hp_iet(r, 2 + i % 3)
        ch = InductionChain(T, steps=30, stop_at_connection=True)
        om = tuple(r.randrange(-9, 10) for _ in range(T.perm.d))
        sums = ch.special_sums(om)
        for n in (10**4, -10**4, r.randrange(-10**4, 10**4)):
            x = random_points(r, T, 1)[0]
            assert ch.birkhoff(x, n, om, sums=sums) == naive_birkhoff_sum(T, om, x, n)
            y = x
            for _ in range(abs(n)):
                y = T(y) if n > 0 else T.inverse(y)
            assert ch.iterate(x, n) == y
            assert isinstance(y, mpmath.ctx_mp_python._mpf)


# 8 ---------------------------------------------------------------------------

def test_c8_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["report", "--spec", "builtin:periodic3", "--out", str(d), "--seed", "5"]) == 0
    fa = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    fb = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    assert fa == fb and len(fa) >= 10
    for rel in fa:
        assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel
