"""Exception and warning types shared across the package."""


class EntvecError(Exception):
    """Base class for every error this package raises deliberately."""


class NotHermitian(EntvecError):
    """Matrix fails the Hermitian-within-tolerance precondition."""


class NotPSD(EntvecError):
    """Matrix has an eigenvalue below the negative-noise clamp window."""


class NoConvergence(EntvecError):
    """Eigensolver off-diagonal mass did not fall below tolerance in time."""


class BadDimension(EntvecError):
    """Dimension or qubit count outside the supported range."""


class BadSubsystem(EntvecError):
    """Subsystem selection is empty, duplicated, or out of range."""


class BadPair(EntvecError):
    """Qubit pair is not an ordered pair of distinct in-range labels."""


class NotNormalized(EntvecError):
    """State norm or trace differs from 1 beyond tolerance."""


class BadStateFile(EntvecError):
    """State file is missing fields, malformed, or inconsistent."""


class NonUnimodularWeight(EntvecError):
    """A basis expansion weight of a flip operator is not +/-1."""


class DomainError(EntvecError):
    """Scalar function argument outside its mathematical domain."""


class DegenerateDenominatorWarning(UserWarning):
    """Whole-concurrence denominator fell below tolerance; value reported as 0."""
