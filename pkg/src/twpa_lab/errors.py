"""Exception hierarchy.

Every model-domain violation derives from :class:`DomainError` so the CLI can
map the whole family onto a single exit code.
"""


class DomainError(ValueError):
    """Input outside the validity domain of a model."""


class NonPhysicalMoments(DomainError):
    pass


class NonPhysicalCovariance(DomainError):
    pass


class InvalidAsymmetry(DomainError):
    pass


class DegenerateChannel(DomainError):
    pass


class NonConstantProfile(DomainError):
    """A closed form that needs constant decay rates was given a profile."""


class QuadratureFailure(RuntimeError):
    pass


class DivergentGain(DomainError):
    pass


class SubunityGain(DomainError):
    pass


class AsymmetricInput(DomainError):
    pass


class NoMinimum(DomainError):
    pass


class DegenerateNullSpace(RuntimeError):
    pass


class AsymptoticValidityWarning(UserWarning):
    """An asymptotic formula was evaluated outside its stated regime."""
