"""Dense square matrices of Python integers labelled by an alphabet."""
from fractions import Fraction


class IntMatrix:
    __slots__ = ("alphabet", "rows")

    def __init__(self, alphabet, rows):
        self.alphabet = tuple(alphabet)
        self.rows = tuple(tuple(int(v) for v in r) for r in rows)
        d = len(self.alphabet)
        if len(self.rows) != d or any(len(r) != d for r in self.rows):
            raise ValueError("matrix shape does not match alphabet")

    @classmethod
    def identity(cls, alphabet):
        d = len(alphabet)
        return cls(alphabet, [[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def elementary(cls, alphabet, row, col):
        """Id + E_{row,col}."""
        alphabet = tuple(alphabet)
        i, j = alphabet.index(row), alphabet.index(col)
        d = len(alphabet)
        return cls(alphabet, [[(1 if a == b else 0) + (1 if (a, b) == (i, j) else 0) for b in range(d)] for a in range(d)])

    @property
    def d(self):
        return len(self.alphabet)

    def __getitem__(self, ij):
        i, j = ij
        if not isinstance(i, int):
            i = self.alphabet.index(i)
        if not isinstance(j, int):
            j = self.alphabet.index(j)
        return self.rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            cols = list(zip(*other.rows))
            return IntMatrix(self.alphabet, [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        return NotImplemented

    def apply(self, v):
        """Matrix times a vector of arbitrary scalars (exact or mpf)."""
        v = list(v)
        out = []
        for r in self.rows:
            acc = None
            for a, x in zip(r, v):
                if a:
                    t = x * a if a != 1 else x
                    acc = t if acc is None else acc + t
            out.append(acc if acc is not None else v[0] * 0)
        return tuple(out)

    @property
    def T(self):
        return IntMatrix(self.alphabet, list(zip(*self.rows)))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def row_sums(self):
        return tuple(sum(r) for r in self.rows)

    def col_sums(self):
        return tuple(sum(c) for c in zip(*self.rows))

    def max_entry(self):
        return max(max(r) for r in self.rows)

    def min_entry(self):
        return min(min(r) for r in self.rows)

    def is_positive(self):
        return self.min_entry() > 0

    def inf_norm(self):
        return max(sum(abs(v) for v in r) for r in self.rows)

    def det(self):
        """Bareiss fraction-free elimination."""
        m = [list(r) for r in self.rows]
        n = len(m)
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def to_fraction_rows(self):
        return [[Fraction(v) for v in r] for r in self.rows]

    def tolist(self):
        return [list(r) for r in self.rows]

    def to_csv(self):
        lines = ["," + ",".join(map(str, self.alphabet))]
        for a, r in zip(self.alphabet, self.rows):
            lines.append(str(a) + "," + ",".join(str(v) for v in r))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"
