"""Exception hierarchy shared by the analysis, simulation and CLI layers."""


class SWEError(Exception):
    """Base class for all errors raised by :mod:`swebc`."""


class NonPositiveGeopotential(SWEError, ValueError):
    """A state with ``phi <= 0`` (dry or unphysical) was requested."""


class InvalidNormal(SWEError, ValueError):
    """A boundary normal is not of unit length."""


class AmbiguousRegime(SWEError):
    """The Froude number sits on a crossover (Fr = 1/2 or Fr = 1).

    One of the augmented eigenvalues is then zero within tolerance and the
    classifier refuses to pick a side.
    """


class PartitionMismatch(SWEError):
    """Reflection-matrix shape or partition disagrees with eigenvalue signs."""


class OutOfRegime(SWEError, ValueError):
    """A Froude number lies outside the band where a formula applies."""


class WrongCoefficientCount(SWEError, ValueError):
    """The number of boundary coefficients does not match the regime."""


class UnstableCoefficients(SWEError, ValueError):
    """Boundary coefficients fall outside the energy-stable ellipse."""


class BadGridSpec(SWEError, ValueError):
    """Grid extents or cell counts are invalid."""


class RegimeMismatch(SWEError):
    """An edge's instantaneous regime differs from its configured one."""


class DryState(SWEError):
    """The geopotential became non-positive (or non-finite) somewhere."""


class Divergence(SWEError):
    """The energy exceeded the blow-up threshold."""


class ConfigError(SWEError, ValueError):
    """A run configuration document is malformed."""
