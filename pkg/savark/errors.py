from __future__ import annotations

from typing import Optional


class SavArkError(Exception):
    """Base class for every error raised by the savark package."""


class ConfigError(SavArkError, ValueError):
    """Invalid or unresolvable configuration, unknown names, violated preconditions."""


class ValidationError(ConfigError):
    def __init__(self, name: str, violations: list[str]):
        self.name = name
        self.violations = list(violations)
        super().__init__(f"invalid tableau '{name}': " + "; ".join(self.violations))


class UnsupportedOrderError(ConfigError):
    pass


class SolverError(SavArkError, RuntimeError):
    """Numerical failure while advancing a solution."""


class SingularSolveError(SolverError):
    pass


class StageSingularError(SolverError):
    pass


class StructureError(SolverError):
    """Tableaux whose stage equations cannot be resolved in stage order."""


class IntegrationError(SolverError):
    def __init__(self, step: int, cause: Exception, time: Optional[float] = None):
        self.step = step
        self.time = time
        self.cause = cause
        where = f"step {step}" if time is None else f"step {step} (t={time:.6g})"
        super().__init__(f"{where}: {cause}")
