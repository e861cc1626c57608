"""Real number fields Q(r) with exact arithmetic and decidable signs.

An element is a coefficient vector (c_0, ..., c_{k-1}) over Q standing for
c_0 + c_1 r + ... + c_{k-1} r^{k-1}, where r is the real root of a monic
irreducible polynomial isolated by a rational interval.  Signs are decided
by refining the isolating interval until interval evaluation of the
element excludes zero, which always terminates for a nonzero element.
"""
from fractions import Fraction
import threading


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def _peval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _imul(a, b, c, d):
    p = (a * c, a * d, b * c, b * d)
    return min(p), max(p)


def _ieval(coeffs, lo, hi):
    """Enclosure of the polynomial's range over [lo, hi] (Horner form)."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        a, b = _imul(a, b, lo, hi)
        a, b = a + c, b + c
    return a, b


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _trim(a)
    return q, a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _sturm_count(p, lo, hi):
    """Number of distinct real roots of p in (lo, hi]."""
    seq = [_trim(p)]
    dp = _trim([i * c for i, c in enumerate(p)][1:])
    seq.append(dp)
    while seq[-1]:
        _, r = _pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        signs = [v for v in (_peval(s, x) for s in seq) if v != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))

    return changes(lo) - changes(hi)


class NumberField:
    """Q(r) for the real root r of ``min_poly`` lying in ``root_interval``.

    ``min_poly`` lists coefficients from the constant term up.
    """

    def __init__(self, min_poly, root_interval, name="r"):
        poly = [_frac(c) for c in min_poly]
        poly = _trim(poly)
        if len(poly) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        lead = poly[-1]
        self.poly = tuple(c / lead for c in poly)
        self.degree = len(self.poly) - 1
        lo, hi = (_frac(v) for v in root_interval)
        if not lo < hi:
            raise ValueError("root interval must satisfy lo < hi")
        plo, phi = _peval(self.poly, lo), _peval(self.poly, hi)
        if plo == 0 or phi == 0 or (plo > 0) == (phi > 0):
            raise ValueError("root interval endpoints must bracket a simple root")
        if _sturm_count(list(self.poly), lo, hi) != 1:
            raise ValueError("root interval does not isolate a single root")
        self.root_interval = (lo, hi)
        self.name = name
        self._lo, self._hi = lo, hi
        self._sign_lo = plo > 0
        self._lock = threading.Lock()

    def key(self):
        return (self.poly, self.root_interval)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NumberField(min_poly={[str(c) for c in self.poly]}, root_interval={[str(v) for v in self.root_interval]})"

    def descriptor(self):
        return {
            "min_poly": [str(c) for c in self.poly],
            "root_interval": [str(v) for v in self.root_interval],
        }

    def enclosure(self, bits):
        """Rational interval of width <= 2**-bits containing the root."""
        width = Fraction(1, 1 << bits)
        with self._lock:
            lo, hi = self._lo, self._hi
            if hi - lo > width:
                while hi - lo > width:
                    mid = (lo + hi) / 2
                    # snap the midpoint to a short dyadic to keep denominators small
                    k = (hi - lo).denominator.bit_length() + 2
                    mid = Fraction(round(mid * (1 << k)), 1 << k)
                    if not lo < mid < hi:
                        mid = (lo + hi) / 2
                    v = _peval(self.poly, mid)
                    if v == 0:
                        lo = hi = mid
                        break
                    if (v > 0) == self._sign_lo:
                        lo = mid
                    else:
                        hi = mid
                self._lo, self._hi = lo, hi
            return lo, hi

    def __call__(self, coeffs):
        return FieldElement(self, coeffs)

    def gen(self):
        return FieldElement(self, [0, 1])

    def one(self):
        return FieldElement(self, [1])

    def zero(self):
        return FieldElement(self, [])


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [_frac(c) for c in coeffs]
        if len(coeffs) > field.degree:
            _, coeffs = _pdivmod(coeffs, list(field.poly))
        coeffs = coeffs + [Fraction(0)] * (field.degree - len(coeffs))
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [other])
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, _pmul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        a = _trim(list(self.coeffs))
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: track s with s*a = r (mod m)
        r0, r1 = list(self.field.poly), a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        # r0 is a nonzero constant since the minimal polynomial is irreducible
        if len(r0) != 1:
            raise ArithmeticError("minimal polynomial is not irreducible")
        c = r0[0]
        return FieldElement(self.field, [x / c for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- order ----------------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def enclosure(self, bits):
        lo, hi = self.field.enclosure(bits)
        return _ieval(self.coeffs, lo, hi)

    def sign(self):
        if self.is_zero():
            return 0
        bits = 64
        while True:
            a, b = self.enclosure(bits)
            if a > 0:
                return 1
            if b < 0:
                return -1
            bits *= 2

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FieldElement) or other.field == self.field else None
        if o is None:
            return False
        return self.coeffs == o.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.key(), self.coeffs))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversion -----------------------------------------------------
    def rational_approx(self, rel_bits):
        """Rational within relative error 2**-rel_bits of the true value."""
        if self.is_zero():
            return Fraction(0)
        bits = rel_bits + 16
        while True:
            a, b = self.enclosure(bits)
            if (a > 0 or b < 0) and (b - a) * (1 << rel_bits) <= min(abs(a), abs(b)):
                return (a + b) / 2
            bits *= 2

    def to_hp(self, ctx):
        q = self.rational_approx(ctx.prec + 8)
        return ctx.mpf(q.numerator) / q.denominator

    def __float__(self):
        q = self.rational_approx(60)
        return q.numerator / q.denominator

    def as_strings(self):
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.field.name if i == 1 else f"{self.field.name}^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"{c}*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms) if terms else "0"
