"""Exception taxonomy shared across the package.

Every precondition or malformed-input failure derives from InputError so
the service and CLI can map the whole family to one exit path (HTTP 422 /
exit code 2) without enumerating subclasses.
"""


class InputError(ValueError):
    """Base class for precondition violations and malformed inputs."""


class ParseError(InputError):
    """Malformed text input; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# gf2 ------------------------------------------------------------------

class NonSquareError(InputError):
    pass


class NotAlternatingError(InputError):
    pass


class OddDimensionError(InputError):
    pass


# multilinear ----------------------------------------------------------

class IndexOutOfRangeError(InputError):
    pass


class SingularBasisChangeError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class WrongOrderError(InputError):
    pass


class NotSymmetricError(InputError):
    pass


class WrongFormatError(InputError):
    pass


class FormatMismatchError(InputError):
    pass


class UnbalancedInvariantError(InputError):
    pass


class UnsupportedFormatError(InputError):
    pass


# homology -------------------------------------------------------------

class MalformedSimplexError(InputError):
    pass


class NotClosedError(InputError):
    pass


class NotCocycleError(InputError):
    pass


class ArityMismatchError(InputError):
    pass


class TrivialCohomologyError(InputError):
    pass


class NotASurfaceError(InputError):
    pass


# graphs ---------------------------------------------------------------

class DisconnectedGraphError(InputError):
    pass


class AcyclicError(InputError):
    pass


class TooLargeError(InputError):
    pass


# lattice --------------------------------------------------------------

class DimensionTooLargeError(InputError):
    pass


class BudgetExceededError(InputError):
    pass


class NotRiemannianFlatError(InputError):
    pass


class DependentVectorsError(InputError):
    pass


# symplectic -----------------------------------------------------------

class NoPairingError(InputError):
    """No perfect matching with nonzero pair values exists.

    Nondegenerate alternating forms always admit one, so this outcome
    certifies that the form is degenerate.
    """


class UnknownBuiltinError(InputError):
    pass
