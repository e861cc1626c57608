"""Pairs of orderings (top, bottom) of a finite alphabet, and Rauzy moves."""
from ..errors import NotABijection, Reducible


class Permutation:
    """Combinatorial datum of an interval exchange.

    ``top`` lists symbols in the order of the intervals before the map,
    ``bottom`` the order of their images.  ``alphabet`` fixes the indexing
    of every vector and matrix attached to the datum; it defaults to the top
    order and is carried unchanged through Rauzy moves.
    """

    __slots__ = ("top", "bottom", "alphabet", "_index")

    def __init__(self, top, bottom, alphabet=None, check=True):
        top = tuple(top)
        bottom = tuple(bottom)
        if alphabet is None:
            alphabet = top
        alphabet = tuple(alphabet)
        if check:
            if len(set(top)) != len(top) or len(set(bottom)) != len(bottom):
                raise NotABijection("repeated label in an ordering")
            if set(top) != set(bottom) or set(top) != set(alphabet) or len(alphabet) != len(set(alphabet)):
                raise NotABijection("top and bottom are not orderings of the same alphabet")
            if len(top) < 2:
                raise NotABijection("alphabet needs at least two symbols")
            k = reducible_at(top, bottom)
            if k:
                raise Reducible(k)
        self.top = top
        self.bottom = bottom
        self.alphabet = alphabet
        self._index = {a: i for i, a in enumerate(alphabet)}

    @property
    def d(self):
        return len(self.top)

    def index(self, a):
        return self._index[a]

    def pi0(self, a):
        """1-based position of ``a`` in the top row."""
        return self.top.index(a) + 1

    def pi1(self, a):
        return self.bottom.index(a) + 1

    # the two symbols compared by one Rauzy-Veech step
    @property
    def top_last(self):
        return self.top[-1]

    @property
    def bottom_last(self):
        return self.bottom[-1]

    def rauzy(self, eps):
        """Image under the type-``eps`` Rauzy operation.

        Type 0: the top-last symbol wins, the bottom-last symbol is moved in
        the bottom row to just after the winner.  Type 1 is the mirror move
        on the top row.
        """
        if eps == 0:
            w, l = self.top[-1], self.bottom[-1]
            row = list(self.bottom[:-1])
            row.insert(row.index(w) + 1, l)
            return Permutation(self.top, row, self.alphabet, check=False)
        if eps == 1:
            w, l = self.bottom[-1], self.top[-1]
            row = list(self.top[:-1])
            row.insert(row.index(w) + 1, l)
            return Permutation(row, self.bottom, self.alphabet, check=False)
        raise ValueError("Rauzy type must be 0 or 1")

    def inverse_rauzy(self, eps):
        """Source permutation of the type-``eps`` move ending at ``self``."""
        if eps == 0:
            w = self.top[-1]
            row = list(self.bottom)
            j = row.index(w)
            if j + 1 >= len(row) or row[-1] == w:
                return None
            l = row.pop(j + 1)
            row.append(l)
            src = Permutation(self.top, row, self.alphabet, check=False)
        else:
            w = self.bottom[-1]
            row = list(self.top)
            j = row.index(w)
            if j + 1 >= len(row) or row[-1] == w:
                return None
            l = row.pop(j + 1)
            row.append(l)
            src = Permutation(row, self.bottom, self.alphabet, check=False)
        if src.rauzy(eps) != self or reducible_at(src.top, src.bottom):
            return None
        return src

    def relabeled(self, alphabet):
        return Permutation(self.top, self.bottom, alphabet, check=False)

    def key(self):
        return (self.top, self.bottom)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.top == other.top and self.bottom == other.bottom

    def __hash__(self):
        return hash((self.top, self.bottom))

    def __repr__(self):
        return f"Permutation({' '.join(map(str, self.top))} / {' '.join(map(str, self.bottom))})"

    def to_dict(self):
        return {"alphabet": list(self.alphabet), "top": list(self.top), "bottom": list(self.bottom)}


def reducible_at(top, bottom):
    """Smallest k < d with the first k symbols of both rows equal as sets, else 0."""
    seen_t, seen_b = set(), set()
    for k in range(1, len(top)):
        seen_t.add(top[k - 1])
        seen_b.add(bottom[k - 1])
        if seen_t == seen_b:
            return k
    return 0


def make_permutation(top, bottom, alphabet=None):
    return Permutation(top, bottom, alphabet)


def symmetric_permutation(d, labels=None):
    labels = list(labels) if labels is not None else [chr(ord("A") + i) for i in range(d)]
    return Permutation(labels, labels[::-1])


def all_irreducible(d, labels=None):
    """Every irreducible (top, bottom) pair with top fixed to the label order."""
    from itertools import permutations

    labels = tuple(labels) if labels is not None else tuple(chr(ord("A") + i) for i in range(d))
    out = []
    for bot in permutations(labels):
        if not reducible_at(labels, bot):
            out.append(Permutation(labels, bot))
    return out
