"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A config file, CLI argument, or serialized input failed validation."""


class GeneratorRejection(ValueError):
    """An environment generator rejected its parameters.

    Raised when the requested instance cannot exist (segment count above the
    horizon, Bernoulli means outside [0, 1], drift budget below the minimax
    floor, and similar). Distinct from ConfigError so callers can tell a
    malformed request from a well-formed but infeasible one.
    """
