"""Standard and affine interval exchange maps on [0, |lengths|)."""
from bisect import bisect_right
from fractions import Fraction

from ..errors import ClosingConditionViolated, OutOfDomain
from .permutation import Permutation
from .scalars import DEFAULT_BITS, all_exact, hp_context, is_exact, is_hp, to_hp


def _cumulative(order, size):
    out = {}
    acc = None
    for a in order:
        out[a] = acc if acc is not None else size[a] * 0
        acc = size[a] if acc is None else acc + size[a]
    return out, acc


def _zero_like(x):
    return x * 0


class Iet:
    """Interval exchange with lengths indexed by ``perm.alphabet``.

    Lengths may be exact (Fraction, FieldElement) or mpf; mixing regimes in
    one map is not supported.
    """

    __slots__ = ("perm", "lengths", "_top_left", "_bot_left", "total", "_top_keys", "_bot_keys", "_top_syms", "_bot_syms")

    def __init__(self, perm: Permutation, lengths, check=True):
        if isinstance(lengths, dict):
            lengths = tuple(lengths[a] for a in perm.alphabet)
        lengths = tuple(Fraction(v) if isinstance(v, int) else v for v in lengths)
        if len(lengths) != perm.d:
            raise ValueError("one length per symbol required")
        if check:
            for v in lengths:
                if not v > 0:
                    raise ValueError("lengths must be positive")
        self.perm = perm
        self.lengths = lengths
        size = {a: lengths[perm.index(a)] for a in perm.alphabet}
        self._top_left, self.total = _cumulative(perm.top, size)
        self._bot_left, _ = _cumulative(perm.bottom, size)
        self._top_syms = perm.top
        self._bot_syms = perm.bottom
        self._top_keys = [self._top_left[a] for a in perm.top]
        self._bot_keys = [self._bot_left[a] for a in perm.bottom]

    @property
    def d(self):
        return self.perm.d

    def length(self, a):
        return self.lengths[self.perm.index(a)]

    def is_exact(self):
        return all_exact(self.lengths)

    def top_left(self, a):
        return self._top_left[a]

    def bottom_left(self, a):
        return self._bot_left[a]

    def image_length(self, a):
        return self.length(a)

    def _check(self, x):
        if x < 0 or not x < self.total:
            raise OutOfDomain(f"{x} outside [0, {self.total})")

    def symbol_at(self, x):
        self._check(x)
        return self._top_syms[bisect_right(self._top_keys, x) - 1]

    def image_symbol_at(self, y):
        self._check(y)
        return self._bot_syms[bisect_right(self._bot_keys, y) - 1]

    def __call__(self, x):
        a = self.symbol_at(x)
        return x - self._top_left[a] + self._bot_left[a]

    def inverse(self, y):
        a = self.image_symbol_at(y)
        return y - self._bot_left[a] + self._top_left[a]

    def evaluate(self, x):
        return self(x)

    def singularities(self):
        """Left endpoints of the top intervals 2..d."""
        return [self._top_left[a] for a in self.perm.top[1:]]

    def inverse_singularities(self):
        return [self._bot_left[a] for a in self.perm.bottom[1:]]

    def normalized(self):
        s = self.total
        return Iet(self.perm, tuple(v / s for v in self.lengths), check=False)

    def with_perm(self, perm, lengths):
        return Iet(perm, lengths, check=False)

    def as_aiet(self, bits=DEFAULT_BITS):
        zero = Fraction(0)
        return Aiet(self.perm, self.lengths, (zero,) * self.d, bits=bits)

    def __repr__(self):
        return f"Iet({self.perm!r}, {list(self.lengths)!r})"


class Aiet:
    """Affine interval exchange: interval a has length eta_a and slope exp(omega_a).

    ``omega`` entries may be exact (then exp is evaluated at ``bits``) or mpf.
    If every omega entry is exactly zero the map is an IET and all arithmetic
    stays in the lengths' regime.
    """

    __slots__ = ("perm", "lengths", "omega", "bits", "ctx", "slopes", "total", "image_total", "_top_left", "_bot_left", "_top_keys", "_bot_keys", "_flat", "closing_defect")

    def __init__(self, perm: Permutation, eta, omega, bits=DEFAULT_BITS, tol=None, check=True):
        if isinstance(eta, dict):
            eta = tuple(eta[a] for a in perm.alphabet)
        if isinstance(omega, dict):
            omega = tuple(omega[a] for a in perm.alphabet)
        eta = tuple(Fraction(v) if isinstance(v, int) else v for v in eta)
        omega = tuple(Fraction(v) if isinstance(v, int) else v for v in omega)
        if len(eta) != perm.d or len(omega) != perm.d:
            raise ValueError("one length and one log-slope per symbol required")
        self.perm = perm
        self.omega = omega
        self.bits = int(bits)
        self.ctx = ctx = hp_context(self.bits)
        self._flat = all(is_exact(w) and w == 0 for w in omega)
        if check:
            for v in eta:
                if not v > 0:
                    raise ValueError("lengths must be positive")
        if self._flat:
            self.lengths = eta
            self.slopes = (Fraction(1),) * perm.d
            img = eta
        else:
            self.lengths = tuple(to_hp(v, ctx) for v in eta)
            self.slopes = tuple(ctx.exp(to_hp(w, ctx)) for w in omega)
            img = tuple(h * s for h, s in zip(self.lengths, self.slopes))
        size = {a: self.lengths[perm.index(a)] for a in perm.alphabet}
        isize = {a: img[perm.index(a)] for a in perm.alphabet}
        self._top_left, self.total = _cumulative(perm.top, size)
        self._bot_left, self.image_total = _cumulative(perm.bottom, isize)
        self._top_keys = [self._top_left[a] for a in perm.top]
        self._bot_keys = [self._bot_left[a] for a in perm.bottom]
        if self._flat:
            self.closing_defect = 0
        else:
            self.closing_defect = abs(self.image_total - self.total)
            if tol is None:
                tol = ctx.mpf(2) ** (-(self.bits - 16))
            if check and self.closing_defect > tol * self.total:
                raise ClosingConditionViolated(
                    f"sum eta*exp(omega) - sum eta = {ctx.nstr(self.image_total - self.total, 8)}"
                )

    @property
    def d(self):
        return self.perm.d

    def is_flat(self):
        return self._flat

    def length(self, a):
        return self.lengths[self.perm.index(a)]

    def log_slope(self, a):
        return self.omega[self.perm.index(a)]

    def slope(self, a):
        return self.slopes[self.perm.index(a)]

    def image_length(self, a):
        return self.length(a) * self.slope(a)

    def top_left(self, a):
        return self._top_left[a]

    def bottom_left(self, a):
        return self._bot_left[a]

    def _check(self, x):
        if x < 0 or not x < self.total:
            raise OutOfDomain(f"{x} outside [0, {self.total})")

    def symbol_at(self, x):
        self._check(x)
        return self.perm.top[bisect_right(self._top_keys, x) - 1]

    def image_symbol_at(self, y):
        self._check(y)
        i = bisect_right(self._bot_keys, y) - 1
        return self.perm.bottom[i]

    def __call__(self, x):
        a = self.symbol_at(x)
        if self._flat:
            return x - self._top_left[a] + self._bot_left[a]
        x = x if is_hp(x) else to_hp(x, self.ctx)
        i = self.perm.index(a)
        y = self._bot_left[a] + self.slopes[i] * (x - self._top_left[a])
        # the image tiles [0, image_total); clamp rounding into the domain
        if y >= self.total:
            y = self.total - self.total * self.ctx.eps
        return y

    def inverse(self, y):
        a = self.image_symbol_at(y)
        if self._flat:
            return y - self._bot_left[a] + self._top_left[a]
        y = y if is_hp(y) else to_hp(y, self.ctx)
        i = self.perm.index(a)
        x = self._top_left[a] + (y - self._bot_left[a]) / self.slopes[i]
        if x >= self.total:
            x = self.total - self.total * self.ctx.eps
        return x

    def evaluate(self, x):
        return self(x)

    def singularities(self):
        return [self._top_left[a] for a in self.perm.top[1:]]

    def inverse_singularities(self):
        return [self._bot_left[a] for a in self.perm.bottom[1:]]

    def normalized(self):
        s = self.total
        return Aiet(self.perm, tuple(v / s for v in self.lengths), self.omega, bits=self.bits, check=False)

    def to_iet(self):
        if not self._flat:
            raise ValueError("map has nonzero log-slopes")
        return Iet(self.perm, self.lengths, check=False)

    def __repr__(self):
        return f"Aiet({self.perm!r}, eta={list(self.lengths)!r}, omega={list(self.omega)!r})"


def evaluate_iet(T, x):
    return T(x)


def evaluate_aiet(T, x):
    return T(x)


def singularities(T):
    return T.singularities()
