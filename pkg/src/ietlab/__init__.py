"""Rauzy-Veech renormalization laboratory for interval exchanges and affine interval exchanges."""
__version__ = "0.1.0"

from .core import Aiet, Iet, Permutation  # noqa: E402,F401
