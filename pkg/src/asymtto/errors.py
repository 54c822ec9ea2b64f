"""Exception types raised by the library.

Errors fall in two groups.  ``InputError`` subclasses flag a request that
violates an operation's preconditions; ``NumericalError`` subclasses flag a
computation that could not reach its accuracy target.  The CLI maps the two
groups to different exit codes.
"""


class AttoError(Exception):
    """Base class for all library errors."""


class InputError(AttoError, ValueError):
    pass


class NumericalError(AttoError, ArithmeticError):
    pass


class DuplicateZeros(InputError):
    pass


class AmbiguousMatching(InputError):
    pass


class BasisInadmissible(InputError):
    pass


class BasisMismatch(InputError):
    pass


class PointCollision(InputError):
    pass


class MissingEntry(InputError):
    pass


class NotAMember(InputError):
    pass


class NonConvergence(NumericalError):
    pass


class PoleProximity(NumericalError):
    pass


class NearSingular(NumericalError):
    pass


class DegenerateSystem(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class FormulaInapplicable(NumericalError):
    pass


class AliasingRisk(NumericalError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass
