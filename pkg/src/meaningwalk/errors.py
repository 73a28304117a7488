"""Exception hierarchy shared across the package."""


class MeaningWalkError(Exception):
    """Base class for all package errors."""


class GraphError(MeaningWalkError, ValueError):
    """Invalid graph structure or graph input."""


class DisconnectedGraphError(GraphError):
    """An operation needing a connected graph got a disconnected one."""


class InfeasibleParametersError(MeaningWalkError, ValueError):
    """A generator exhausted its retry budget or got unsatisfiable parameters."""


class DegenerateFitError(MeaningWalkError, ValueError):
    """Fewer than two distinct abscissae for a power-law fit."""


class ConfigError(MeaningWalkError, ValueError):
    """Malformed experiment configuration."""
