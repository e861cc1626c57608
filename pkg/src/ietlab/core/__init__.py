from .intmat import IntMatrix
from .maps import Aiet, Iet, evaluate_aiet, evaluate_iet, singularities
from .numberfield import FieldElement, NumberField
from .permutation import Permutation, all_irreducible, make_permutation, symmetric_permutation
from .scalars import DEFAULT_BITS, hp_context, is_exact, is_hp, to_float, to_hp

__all__ = [
    "IntMatrix", "Aiet", "Iet", "evaluate_aiet", "evaluate_iet", "singularities",
    "FieldElement", "NumberField", "Permutation", "all_irreducible", "make_permutation",
    "symmetric_permutation", "DEFAULT_BITS", "hp_context", "is_exact", "is_hp", "to_float", "to_hp",
]
