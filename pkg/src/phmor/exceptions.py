"""Exception hierarchy.

Construction layers raise; the verification layer only reports.
"""


class PHMORError(Exception):
    """Base class for all errors raised by phmor."""


class StructureError(PHMORError, ValueError):
    """Matrices violate the port-Hamiltonian structural invariants."""


class InvalidParameter(PHMORError, ValueError):
    """A generator or configuration parameter is out of range."""


class SingularResolvent(PHMORError, ArithmeticError):
    """``sI - (J - R)H`` is numerically singular at the requested point.

    The interpolation or evaluation point must be moved off the spectrum.
    """

    def __init__(self, message, s=None, index=None, rcond=None):
        super().__init__(message)
        self.s = s
        self.index = index
        self.rcond = rcond


class SingularStepMatrix(PHMORError, ArithmeticError):
    """The implicit-midpoint step matrix ``I - dt/2 (J - R)H`` is singular."""


class SingularPencil(PHMORError, ArithmeticError):
    """The Petrov-Galerkin matrix ``W* V`` is not invertible."""


class NotSymplectic(PHMORError, ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotLeftInverse(PHMORError, ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class OddDimension(StructureError):
    """An even dimension is required (state space, or ``p + M`` for a reduction basis)."""


class RankDeficient(PHMORError, ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class WrongInertia(PHMORError, ValueError):
    """A Hermitian matrix does not have the inertia a congruence needs."""

    def __init__(self, message, measured=None, required=None):
        super().__init__(message)
        self.measured = measured
        self.required = required


class IllConditioned(PHMORError, ArithmeticError):
    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class NotLossless(PHMORError, ValueError):
    """The lossless reduction was requested for a system with ``R != 0``."""
