"""Affine interval exchanges with prescribed rotation-number prefix and log-slope.

The construction runs the induction backwards: omega is pushed to level D
(omega^(D) = Z_{0,D} omega, exact), an AIET with that log-slope is seeded at
level D and pulled back through D inverse Rauzy-Veech steps.  Inverse steps
always produce the prescribed type, so the prefix is right by construction;
it is nevertheless re-checked by running the forward induction.
"""
from dataclasses import dataclass, field

from .cocycle import InductionChain, accumulate
from .core.maps import Aiet, Iet
from .core.scalars import hp_context, is_exact, to_float, to_hp
from .errors import Connection, IncompatibleOmega, PrecisionExhausted, PrefixMismatch
from .rauzy import DEFAULT_GUARD_BITS, RauzyPath, inverse_rv_step, rotation_number_prefix


def check_compatibility(T0, omega):
    """Signed defect <omega, lambda> (exact when both sides are exact)."""
    acc = 0
    for w, lam in zip(omega, T0.lengths):
        acc = acc + w * lam
    return acc


def _as_path(source, rv_needed, guard_bits):
    if isinstance(source, RauzyPath):
        if len(source) < rv_needed:
            raise PrefixMismatch(f"path has {len(source)} moves, {rv_needed} needed")
        return source
    return rotation_number_prefix(source, rv_needed, guard_bits)


@dataclass
class AffBuildResult:
    aiet: Aiet
    prefix: int  # RV moves of the target path reproduced by the forward induction
    depth: int  # RV depth of the seed
    zorich_depth: int
    gap: float  # sup |eta(depth) - eta(previous depth)|
    closing_defect: float
    history: list = field(default_factory=list)
    seed: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "prefix": self.prefix,
            "depth": self.depth,
            "zorich_depth": self.zorich_depth,
            "eta_gap": self.gap,
            "closing_defect": self.closing_defect,
            "history": self.history,
            "seed": self.seed,
        }


def seed_lengths(omega, ctx):
    """Lengths proportional to exp(-omega/2), the negative group rescaled to close the map."""
    w = [to_hp(v, ctx) for v in omega]
    eta = [ctx.exp(-v / 2) for v in w]
    pos = ctx.fsum(e * (ctx.exp(v) - 1) for e, v in zip(eta, w) if v > 0)
    neg = ctx.fsum(e * (ctx.exp(v) - 1) for e, v in zip(eta, w) if v < 0)
    if pos == 0 and neg == 0:
        return eta
    if pos == 0 or neg == 0:
        raise IncompatibleOmega("log-slopes at the seed level all have one sign")
    c = -pos / neg
    return [e * c if v < 0 else e for e, v in zip(eta, w)]


def pull_back(path, omega, depth, ctx):
    """Seeded level-``depth`` AIET pulled back to level 0 (not normalized)."""
    Z = accumulate(path, 0, depth)
    om_d = Z.apply(list(omega))
    perm_d = path.moves[depth - 1].target if depth else path.start
    eta = seed_lengths(om_d, ctx)
    T = Aiet(perm_d, eta, om_d, bits=ctx.prec, check=False)
    for mv in reversed(path.moves[:depth]):
        T = inverse_rv_step(T, mv)
    return T


def build_aiet(source, omega, depth=40, bits=256, tol=1e-8, max_depth=200, T0=None,
               compat_tol=None, guard_bits=DEFAULT_GUARD_BITS):
    """One element of Aff(gamma, omega).

    ``source`` is the target rotation number: a RauzyPath or an (A)IET whose
    induction generates it.  ``depth`` and ``max_depth`` count Zorich steps;
    the depth doubles until successive builds agree to ``tol``.
    """
    ctx = hp_context(bits)
    omega = tuple(omega)
    if T0 is None and isinstance(source, (Iet, Aiet)):
        T0 = source
    if T0 is not None:
        dfc = check_compatibility(T0, omega)
        lim = ctx.mpf(2) ** (-(bits // 2)) if compat_tol is None else compat_tol
        if not (dfc == 0 if is_exact(dfc) else abs(dfc) <= lim):
            raise IncompatibleOmega(f"<omega, lambda> = {to_float(dfc):.3g}")
    if all(is_exact(v) and v == 0 for v in omega):
        # Aff(gamma, 0) is the IET itself
        if T0 is None:
            raise IncompatibleOmega("omega = 0 needs the IET")
        T = Aiet(T0.perm, [v / T0.total for v in T0.lengths], omega, bits=bits)
        return AffBuildResult(T, 0, 0, 0, 0.0, 0.0, [], {"rule": "identity"})

    history = []
    z = max(2, depth)
    prev = None
    while True:
        zt, path = _zorich_path(source, z, guard_bits)
        T = _normalized(pull_back(path, omega, zt[z], ctx))
        Tm = _normalized(pull_back(path, omega, zt[z - 1], ctx))
        gap = float(max(abs(a - b) for a, b in zip(T.lengths, Tm.lengths)))
        history.append((z, zt[z], gap))
        if gap < tol or z >= max_depth:
            break
        prev = z
        z = min(2 * z, max_depth)
    del prev
    n = zt[z]
    try:
        got = rotation_number_prefix(T, n, guard_bits)
    except Connection as e:
        raise PrecisionExhausted(f"tie while re-inducing the built map at step {e.step}", step=e.step) from e
    want = path.prefix(n)
    if got.types() != want.types():
        k = next(i for i, (a, b) in enumerate(zip(got.types(), want.types())) if a != b)
        raise PrefixMismatch(f"built map leaves the cylinder at step {k}")
    return AffBuildResult(
        aiet=T, prefix=n, depth=n, zorich_depth=z, gap=gap,
        closing_defect=float(T.closing_defect), history=history,
        seed={"rule": "exp(-omega/2), negative group rescaled", "bits": bits},
    )


def _zorich_path(source, z, guard_bits):
    """RV indices of the first z + 1 Zorich times and a path covering them."""
    if isinstance(source, RauzyPath):
        zt = source.zorich_times()
        if len(zt) <= z:
            raise PrefixMismatch(f"path has only {len(zt) - 1} complete Zorich steps")
        return zt, source
    chain = InductionChain(source, zorich=z, guard_bits=guard_bits)
    return chain.zorich_times(), chain.path()


def _normalized(T):
    s = T.total
    return Aiet(T.perm, [v / s for v in T.lengths], T.omega, bits=T.bits)


def log_slope_at(T, n, guard_bits=DEFAULT_GUARD_BITS):
    """omega^(n): read off the induced map and checked against Z_{0,n} omega."""
    chain = InductionChain(T, steps=n, guard_bits=guard_bits)
    direct = tuple(chain.maps[n].omega) if hasattr(chain.maps[n], "omega") else (0,) * T.d
    pushed = tuple(chain.accumulate(0, n).apply(list(T.omega)))
    if direct != pushed:
        raise ArithmeticError("induced log-slopes disagree with the cocycle push")
    return direct
