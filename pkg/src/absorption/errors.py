"""Exception hierarchy.

Errors derived from :class:`FalsificationError` mean a mathematical claim
failed to verify; everything else is a usage or precondition error.
"""


class AbsorptionError(Exception):
    pass


class FalsificationError(AbsorptionError):
    """A certified claim did not hold on the computed data."""


class ModulusMismatch(AbsorptionError):
    pass


class NoSolution(AbsorptionError):
    pass


class NotCyclicNakayama(AbsorptionError):
    pass


class IdempotentDiscoveryFailed(AbsorptionError):
    pass


class DimensionMismatch(AbsorptionError):
    pass


class VertexOutOfRange(AbsorptionError):
    pass


class AlgebraMismatch(AbsorptionError):
    pass


class Inconclusive(AbsorptionError):
    pass


class NotAutomorphism(AbsorptionError):
    pass


class InsufficientDepth(AbsorptionError):
    pass


class NotProjectiveTerms(AbsorptionError):
    pass


class DegreeMismatch(AbsorptionError):
    pass


class NotBasic(AbsorptionError):
    pass


class NoRootOfUnity(AbsorptionError):
    pass


class LiftingFailed(FalsificationError):
    pass


class VerificationFailed(FalsificationError):
    pass


class MixedTypes(FalsificationError):
    pass


class NotBijective(FalsificationError):
    pass
