"""Reading and writing the JSON map description.

    {"alphabet": ["A", "B"], "top": ["A", "B"], "bottom": ["B", "A"],
     "lengths": ["2/3", "1/3"],              # or coefficient arrays with "field"
     "omega": ["0.1", "-0.2"],               # optional, decimal strings
     "field": {"min_poly": [-1, -1, 1], "root_interval": ["1", "2"]},
     "precision": 128}

Lengths and omega may also be objects keyed by symbol.
"""
import json
from fractions import Fraction

from ..errors import ConfigError
from .maps import Aiet, Iet
from .numberfield import FieldElement
from .permutation import Permutation
from .scalars import DEFAULT_BITS, hp_context, is_hp, parse_exact, parse_field, scalar_str


def _by_symbol(v, alphabet, what):
    if isinstance(v, dict):
        try:
            return [v[a] for a in alphabet]
        except KeyError as e:
            raise ConfigError(f"{what} missing symbol {e}") from None
    if not isinstance(v, list) or len(v) != len(alphabet):
        raise ConfigError(f"{what} needs one entry per symbol")
    return v


def from_dict(spec):
    try:
        top = list(spec["top"])
        bottom = list(spec["bottom"])
    except (KeyError, TypeError):
        raise ConfigError("spec needs 'top' and 'bottom' orderings") from None
    alphabet = spec.get("alphabet", top)
    perm = Permutation(top, bottom, alphabet)
    bits = int(spec.get("precision", DEFAULT_BITS))
    field = parse_field(spec.get("field"))
    if "lengths" not in spec:
        raise ConfigError("spec needs 'lengths'")
    raw = _by_symbol(spec["lengths"], perm.alphabet, "lengths")
    try:
        lengths = [parse_exact(v, field) for v in raw]
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad length: {e}") from None
    omega = spec.get("omega")
    if omega is None:
        return Iet(perm, lengths)
    ctx = hp_context(bits)
    vals = []
    for v in _by_symbol(omega, perm.alphabet, "omega"):
        if isinstance(v, list):
            vals.append(FieldElement(field, v))
        elif isinstance(v, str) and "/" in v:
            vals.append(Fraction(v))
        elif isinstance(v, (int, str)):
            try:
                vals.append(Fraction(v) if isinstance(v, int) else ctx.mpf(v))
            except (ValueError, TypeError):
                raise ConfigError(f"bad omega entry {v!r}") from None
        else:
            raise ConfigError(f"bad omega entry {v!r}")
    if all(not is_hp(w) and w == 0 for w in vals):
        return Iet(perm, lengths)
    return Aiet(perm, lengths, vals, bits=bits)


def to_dict(T, field=None):
    out = T.perm.to_dict()
    out["lengths"] = [scalar_str(v) for v in T.lengths]
    f = field
    if f is None:
        for v in T.lengths:
            if isinstance(v, FieldElement):
                f = v.field
                break
    if f is not None:
        out["field"] = f.descriptor()
    if isinstance(T, Aiet):
        out["omega"] = [scalar_str(w) if not isinstance(w, Fraction) else str(w) for w in T.omega]
        out["precision"] = T.bits
    return out


def load(path):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read spec {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"spec {path} is not valid JSON: {e}") from None
    return from_dict(spec)


def dump(T, path, field=None):
    with open(path, "w") as fh:
        json.dump(to_dict(T, field), fh, indent=2, sort_keys=True)
        fh.write("\n")
