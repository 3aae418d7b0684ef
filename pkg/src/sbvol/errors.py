"""Exceptions shared across the package."""


class SbvolError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SbvolError):
    """Inputs live in incompatible ambient spaces."""


class DegenerateInputError(SbvolError):
    """The input is too degenerate for the requested operation."""


class UnsupportedInputError(SbvolError):
    """The input is valid but outside the supported regime (e.g. a non-pointed cone)."""


class InvalidParameterError(SbvolError):
    """A construction was called with parameters outside its domain."""


class ResourceLimitError(SbvolError):
    """An enumeration exceeded its explicit budget; never degrade silently."""


class SubdivisionError(SbvolError):
    """A subdivision violates a structural requirement (cover, faces, integrality, regularity)."""


class InternalConsistencyError(SbvolError):
    """Two routes that must agree disagreed; indicates a bug, not bad input."""
