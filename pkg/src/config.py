"""Size caps and environment configuration."""

import os
from dataclasses import dataclass, fields, replace
from typing import Any

from .errors import PreconditionError

CAP_OVERRIDE_ENV = "WSAT_CAP_OVERRIDE"
DB_PATH_ENV = "WSAT_DB_PATH"


@dataclass(frozen=True)
class Caps:
    """Conservative limits for every exhaustive computation.

    Exceeding a cap raises CapExceededError; nothing is ever approximated
    silently.
    """

    enumeration: int = 10_000_000
    wsat_edges: int = 24
    lp_edges: int = 16
    lp_hard: int = 20
    lp_exact_edges: int = 12
    rank_elements: int = 40
    rank_projection: int = 20
    gamma_edges: int = 22
    canon_vertices: int = 10
    construction_vertices: int = 12
    workers: int = 1

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise PreconditionError(f"cap {f.name} must be positive")

    def with_overrides(self, **overrides: Any) -> "Caps":
        """Return a copy with the non-None overrides applied."""
        known = {f.name for f in fields(self)}
        values = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in known:
                raise PreconditionError(f"unknown cap: {key}")
            values[key] = int(value)
        return replace(self, **values)

    @classmethod
    def from_env(cls) -> "Caps":
        """Defaults updated from WSAT_CAP_OVERRIDE ("key=value,key=value")."""
        raw = os.getenv(CAP_OVERRIDE_ENV, "").strip()
        if not raw:
            return cls()
        overrides: dict[str, Any] = {}
        for item in raw.split(","):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            if not sep:
                raise PreconditionError(
                    f"{CAP_OVERRIDE_ENV}: expected key=value, got {item!r}"
                )
            try:
                overrides[key.strip()] = int(value)
            except ValueError as e:
                raise PreconditionError(
                    f"{CAP_OVERRIDE_ENV}: {key.strip()} is not an integer"
                ) from e
        return cls().with_overrides(**overrides)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_CAPS = Caps()


def default_db_path() -> str:
    return os.getenv(DB_PATH_ENV, ":memory:")
