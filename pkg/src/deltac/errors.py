"""Exception hierarchy shared by every deltac module."""

from __future__ import annotations


class DeltacError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(DeltacError, ValueError):
    """An input violates a documented precondition."""


class DegenerateCouplingError(InvalidArgumentError):
    """z = 0: the free particle is outside the model."""


class SpectralSingularityError(DeltacError):
    """The coupling is purely imaginary, so the biorthonormal system breaks down."""


class UnsupportedOrderError(DeltacError, ValueError):
    """A perturbative order beyond the available closed forms was requested."""


class UnsupportedIntegrandError(DeltacError, ValueError):
    """The integrand tail neither decays nor tends to a constant."""


class UnsupportedCaseError(DeltacError, ValueError):
    """No closed form exists for the requested configuration."""


class DomainError(DeltacError, ValueError):
    """A formula was evaluated outside its domain of definition."""


class MarginError(DeltacError, ValueError):
    """A grid does not extend far enough past the support of its function."""

    def __init__(self, message: str, required_extent: tuple[float, float]):
        super().__init__(message)
        self.required_extent = required_extent


class OutOfRegimeError(DeltacError, ValueError):
    """An asymptotic branch was requested outside its guard rails."""
