"""Seeded random instances.

One user seed drives everything: instance ``i`` of a run uses the stream
SeedSequence(seed, spawn_key=(i,)), so instances can be generated in any
order or in parallel and still agree.
"""
import random
from fractions import Fraction

import numpy as np

from .core.maps import Iet
from .core.permutation import all_irreducible
from .core.scalars import hp_context

HP_LENGTH_BITS = 1024


def instance_rng(seed, index=0):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return random.Random(int(ss.generate_state(2, dtype=np.uint64)[0]))


def random_permutation(rng, d):
    """Uniform irreducible permutation with top row in alphabetical order."""
    perms = all_irreducible(d)
    return perms[rng.randrange(len(perms))]


def random_rational_iet(rng, d, perm=None, den_bits=20):
    """Lengths k_i / sum k with k_i uniform in [1, 2^den_bits]."""
    perm = perm or random_permutation(rng, d)
    ks = [rng.randrange(1, 1 << den_bits) for _ in range(d)]
    s = sum(ks)
    return Iet(perm, [Fraction(k, s) for k in ks])


def random_hp_iet(rng, d, perm=None, length_bits=HP_LENGTH_BITS):
    """Lengths k_i 2^-length_bits (k_i random length_bits-bit integers) in mpf.

    The working precision exceeds ``length_bits``, so every subtraction of
    the induction is exact until a length falls below 2^-length_bits.
    """
    perm = perm or random_permutation(rng, d)
    ctx = hp_context(length_bits + 64)
    lengths = [ctx.ldexp(rng.getrandbits(length_bits) | 1, -length_bits) for _ in range(d)]
    return Iet(perm, lengths)


def random_points(rng, T, count):
    """Points of [0, |T|) in the arithmetic of T."""
    tot = T.total
    out = []
    for _ in range(count):
        u = Fraction(rng.getrandbits(62), 1 << 62)
        if isinstance(tot, (Fraction, int)):
            out.append(u * tot)
        elif hasattr(tot, "context"):
            out.append(tot.context.mpf(u.numerator) / u.denominator * tot)
        else:
            out.append(tot * u)
    return out
