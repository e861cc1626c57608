"""Exception hierarchy.

Every error carries a machine-readable ``code`` and the CLI exit status it
maps to (2 configuration, 3 connection / Keane failure, 4 resolution).
"""


class IetLabError(Exception):
    code = "error"
    exit_status = 1


class ConfigError(IetLabError):
    code = "config"
    exit_status = 2


class NotABijection(IetLabError, ValueError):
    code = "not_a_bijection"
    exit_status = 2


class Reducible(IetLabError, ValueError):
    code = "reducible"
    exit_status = 2

    def __init__(self, k):
        super().__init__(f"permutation is reducible: first {k} symbols are invariant")
        self.k = k


class OutOfDomain(IetLabError, ValueError):
    code = "out_of_domain"
    exit_status = 2


class ClosingConditionViolated(IetLabError, ValueError):
    code = "closing_condition"
    exit_status = 2


class InconsistentMove(IetLabError, ValueError):
    code = "inconsistent_move"
    exit_status = 2


class Connection(IetLabError):
    """Exact (or guarded) tie between the two candidate intervals.

    ``step`` is the Rauzy-Veech step index at which the tie occurred,
    ``lengths`` the two compared lengths, ``guarded`` whether the tie was
    declared by the floating point guard rather than found exactly.
    ``partial`` optionally holds whatever was computed before the tie.
    """

    code = "connection"
    exit_status = 3

    def __init__(self, step=0, lengths=None, guarded=False, partial=None):
        kind = "guarded tie" if guarded else "connection"
        super().__init__(f"{kind} at Rauzy-Veech step {step}")
        self.step = step
        self.lengths = lengths
        self.guarded = guarded
        self.partial = partial


class PrecisionExhausted(IetLabError):
    code = "precision_exhausted"
    exit_status = 3

    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


class SpectralGapNotResolved(IetLabError):
    code = "spectral_gap"
    exit_status = 4


class IncompatibleOmega(IetLabError, ValueError):
    code = "incompatible_omega"
    exit_status = 4


class PrefixMismatch(IetLabError):
    code = "prefix_mismatch"
    exit_status = 4


class PathMismatch(IetLabError):
    code = "path_mismatch"
    exit_status = 4


class NotBcTime(IetLabError):
    code = "not_bc_time"
    exit_status = 4


class OrbitSearchOverflow(IetLabError):
    code = "orbit_search_overflow"
    exit_status = 4


class NoneFound(IetLabError):
    code = "none_found"
    exit_status = 4
