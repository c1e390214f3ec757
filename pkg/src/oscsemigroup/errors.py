"""Exception hierarchy.

Two families: :class:`DomainError` for inputs outside the set where an
operation is mathematically defined, and :class:`NumericalError` for
floating-point failures (ill conditioning, branch cuts, non-convergence).
The CLI maps them to exit codes 2 and 3.
"""


class OscError(Exception):
    """Base class for all package errors."""


class DomainError(OscError):
    pass


class NumericalError(OscError):
    pass


class NotComposable(DomainError):
    """The diamond product A ⋄ B is undefined (1 + AθBθ singular)."""


class QuantumDegenerate(DomainError):
    """det(1 + Aθ) vanishes to tolerance."""


class OutsideDomain(DomainError):
    """Complex time outside the open domain of a holomorphic semigroup."""


class NoGaussianSymbol(DomainError):
    """The symplectic image has -1 in its spectrum; no Gaussian Weyl symbol."""


class PolarUndefined(DomainError):
    """The unitary polar factor exists but has no Gaussian Weyl symbol."""


class NotInSpPlusPlus(DomainError):
    pass


class DegenerateF(DomainError):
    """The momentum block of the form is singular, so the kernel is not a function."""


class DegenerateForm(DomainError):
    pass


class Singular(NumericalError):
    pass


class SingularShift(Singular):
    """1 + M is numerically singular, so the Cayley transform is undefined."""


class BranchCut(NumericalError):
    """An eigenvalue sits on the closed negative real axis."""


class NoConvergence(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass
