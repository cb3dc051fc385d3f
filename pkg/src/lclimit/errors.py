"""Exception types shared across the package (the CLI maps them to exit codes)."""
from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration or parameters (CLI exit code 2)."""


class SolverError(RuntimeError):
    """Numerical failure during time stepping (CLI exit code 3)."""

    def __init__(self, message: str, t: float | None = None):
        if t is not None:
            message = f"{message} (t = {t:.6g})"
        super().__init__(message)
        self.t = t
