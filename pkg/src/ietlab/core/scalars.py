"""Scalar regimes: exact (Fraction / FieldElement) and high precision (mpf).

High precision values are mpf numbers owned by a per-precision mpmath
context, so the mantissa size travels with the value.
"""
from fractions import Fraction
from functools import lru_cache

import mpmath

from .numberfield import FieldElement, NumberField

DEFAULT_BITS = 128


@lru_cache(maxsize=None)
def hp_context(bits=DEFAULT_BITS):
    ctx = mpmath.MPContext()
    ctx.prec = int(bits)
    return ctx


def is_exact(x):
    return isinstance(x, (int, Fraction, FieldElement))


def is_hp(x):
    # each context owns its own mpf subclass, so test the shared base
    return isinstance(x, mpmath.ctx_mp_python._mpf)


def all_exact(xs):
    return all(is_exact(x) for x in xs)


def to_hp(x, ctx):
    """Convert any supported scalar to an mpf of ``ctx``."""
    if isinstance(x, int):
        return ctx.mpf(x)
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, FieldElement):
        return x.to_hp(ctx)
    if isinstance(x, str):
        return ctx.mpf(x)
    if isinstance(x, float):
        return ctx.mpf(x)
    if is_hp(x):
        return ctx.mpf(x)
    raise TypeError(f"unsupported scalar {type(x).__name__}")


def to_float(x):
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, (Fraction, FieldElement)):
        return float(x)
    return float(x)


def to_fraction(x):
    """Exact rational value of an int, Fraction or mpf (mpf values are dyadic)."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if is_hp(x):
        sign, man, exp, _ = x._mpf_
        if not man:
            if exp:
                raise ValueError("infinite or nan mpf has no rational value")
            return Fraction(0)
        return Fraction(-int(man) if sign else int(man)) * (Fraction(2) ** exp)
    raise TypeError(f"no exact rational value for {type(x).__name__}")


def scalar_str(x):
    """Canonical text form used in files: 'p/q', coefficient lists, or decimals."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FieldElement):
        return x.as_strings()
    if is_hp(x):
        ctx = x.context
        return mpmath.libmp.to_str(x._mpf_, max(int(ctx.prec * 0.30103) + 2, 5))
    return str(x)


def parse_exact(v, field=None):
    """Parse 'p/q' (or an int) as a Fraction, a list as a field element."""
    if isinstance(v, (list, tuple)):
        if field is None:
            raise ValueError("coefficient array given but no field descriptor")
        return FieldElement(field, v)
    if isinstance(v, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if any(ch in s for ch in "eE.") and "/" not in s:
            # decimal text is exact too: 0.25 -> 1/4
            return Fraction(s)
        return Fraction(s)
    raise ValueError(f"cannot parse exact scalar from {v!r}")


def parse_field(desc):
    if desc is None:
        return None
    return NumberField(desc["min_poly"], desc["root_interval"], name=desc.get("name", "r"))


def exact_sum(xs):
    acc = Fraction(0)
    for x in xs:
        acc = acc + x
    return acc


def hp_sum(xs, ctx):
    return ctx.fsum(xs)
