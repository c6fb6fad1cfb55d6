"""Session-wide resource limits.

Every engine function reads its caps from :func:`current`, so callers can
tighten or relax limits for a block of work with :func:`using`.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from typing import Iterator


@dataclasses.dataclass(frozen=True)
class SessionConfig:
    degree_bound: int = 2
    spair_budget: int = 200_000
    iteration_cap: int = 64
    exponent_cap: int = 100_000
    max_frobenius_degree: int = 4
    output_mode: str = "text"

    def __post_init__(self) -> None:
        for name in ("degree_bound", "spair_budget", "iteration_cap",
                     "exponent_cap", "max_frobenius_degree"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_mode not in ("text", "json"):
            raise ValueError("output_mode must be 'text' or 'json'")

    def replace(self, **changes) -> "SessionConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, environ=None) -> "SessionConfig":
        """Defaults overridden by ``FSING_*`` environment variables."""
        env = os.environ if environ is None else environ
        kw = {}
        if env.get("FSING_DEGREE_BOUND"):
            kw["degree_bound"] = int(env["FSING_DEGREE_BOUND"])
        if env.get("FSING_BUDGET"):
            kw["spair_budget"] = int(env["FSING_BUDGET"])
        if env.get("FSING_ITERATION_CAP"):
            kw["iteration_cap"] = int(env["FSING_ITERATION_CAP"])
        if env.get("FSING_JSON", "").lower() in ("1", "true", "yes"):
            kw["output_mode"] = "json"
        return cls(**kw)


_current: contextvars.ContextVar[SessionConfig] = contextvars.ContextVar(
    "fsing_config", default=SessionConfig())


def current() -> SessionConfig:
    return _current.get()


@contextlib.contextmanager
def using(config: SessionConfig | None = None, **changes) -> Iterator[SessionConfig]:
    """Temporarily install ``config`` (or the current one with ``changes``)."""
    cfg = config if config is not None else current()
    if changes:
        cfg = cfg.replace(**changes)
    token = _current.set(cfg)
    try:
        yield cfg
    finally:
        _current.reset(token)
