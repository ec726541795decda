"""
Exception hierarchy for the quantum search geometry toolkit.
Every module raises one of these so the CLI can map failures to exit codes.
"""


class QuantumGeometryError(Exception):
    """Base class for all toolkit errors"""


class DomainError(QuantumGeometryError, ValueError):
    """A parameter lies outside the domain of a closed-form expression"""


class NormalizationError(QuantumGeometryError, ValueError):
    """A state or density matrix violates its normalization invariants"""


class DegeneracyError(QuantumGeometryError, ArithmeticError):
    """Numerical degeneracy: negative radicand, vanishing denominator, zero-length path"""


class PreconditionError(QuantumGeometryError, ValueError):
    """An operation precondition does not hold"""


class ConvergenceError(QuantumGeometryError, RuntimeError):
    """The fixed-step integrator is too coarse or fails its order check"""


class EndpointMismatchError(QuantumGeometryError, ValueError):
    """Two trajectories that must share endpoints do not"""


class ConfigurationError(QuantumGeometryError, ValueError):
    """An environment setting could not be parsed"""
