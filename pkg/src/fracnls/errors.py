"""Exception hierarchy shared by every module."""


class FracNLSError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FracNLSError, ValueError):
    """Inconsistent grid, cutoff, config key or parameter domain.

    ``key`` holds the dotted config path when the error comes from a config file.
    """

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class InputError(FracNLSError, ValueError):
    """Invalid data handed to an operation (NaN samples, zero field where a ratio needs mass)."""


class CostError(FracNLSError, RuntimeError):
    """Refusal to run a brute-force oracle on a problem that is too large."""


class InstabilityError(FracNLSError, RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, step, dt, stage=None):
        self.step = step
        self.dt = dt
        self.stage = stage
        where = f"step {step}" if stage is None else f"stage {stage}, step {step}"
        super().__init__(f"non-finite values at {where} (dt={dt:g})")
