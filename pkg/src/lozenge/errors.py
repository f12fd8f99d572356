"""Exception types and small argument checkers shared by all modules."""

from __future__ import annotations

import os

DEFAULT_CAP = 200_000
CAP_ENV_VAR = "LOZENGE_CAP"


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class CapExceededError(RuntimeError):
    """A combinatorial search grew past its configured cap."""


class FitError(RuntimeError):
    """An internal consistency check failed (signals a bug, never user error)."""


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise PreconditionError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise PreconditionError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def check_nonneg(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise PreconditionError(f"{name} must be an integer, got {value!r}")
        if value < 0:
            raise PreconditionError(f"{name} must be nonnegative, got {value}")


def check_positive(**values: int) -> None:
    check_nonneg(**values)
    for name, value in values.items():
        if value == 0:
            raise PreconditionError(f"{name} must be positive")


def require(condition: bool, message: str) -> None:
    if not condition:
        raise PreconditionError(message)
