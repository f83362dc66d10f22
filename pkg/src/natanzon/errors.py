"""Exception hierarchy shared by every module in the package."""


class NatanzonError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NatanzonError, ValueError):
    """An argument lies outside the domain of the operation."""


class GammaPoleError(DomainError):
    """Gamma function evaluated at (or within tolerance of) one of its poles."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class DenominatorError(DomainError, ZeroDivisionError):
    """A Pochhammer denominator vanished inside a terminating series."""


class SingularPotentialError(DomainError):
    """The quadratic R(z) is non-positive where the potential is evaluated."""


class IntegrationError(NatanzonError, RuntimeError):
    """The coordinate ODE could not be integrated over the requested range."""


class OutOfRangeError(DomainError):
    """Interpolation requested outside the tabulated range."""


class BranchAmbiguityError(NatanzonError):
    """The quantization condition has more than one root for a single level."""


class NegativeRadicandError(DomainError):
    """One of the exponent radicands is negative for the requested energy."""


class NonNormalizableError(NatanzonError):
    """A function does not decay on the grid and cannot be normalized."""


class GridEdgeError(NatanzonError):
    """A function is non-negligible at the grid boundary where differences are one-sided."""


class BreakdownError(NatanzonError, ZeroDivisionError):
    """The so(2,1) step coefficient vanished during a Jost recursion."""


class LowestWeightError(NatanzonError):
    """The lowering operator was applied to a lowest-weight state."""


class NodeInWindowError(NatanzonError):
    """The wavefunction vanishes inside the requested fit window."""


class ConfigError(NatanzonError):
    """Malformed command-line or file configuration."""
