"""Run configuration shared by the command line and the pipeline."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Mapping, Optional, Tuple

SEED_ENV = "RIGID_GALOIS_SEED"
DEFAULT_DB_PATH = "rigid_galois.db"


class ConfigError(ValueError):
    """Raised when a run configuration value is out of range."""


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return 1
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


@dataclass
class RunConfig:
    graph_path: Optional[str] = None
    base: Optional[Tuple[int, int]] = None
    seed: int = field(default_factory=default_seed)
    range: int = 100
    precision: Fraction = Fraction(1, 10**12)
    trials: int = 100
    cap: int = 2**20
    brute_force_cap: int = 8
    attempts: int = 5
    tolerance: float = 1e-9
    workers: int = 1
    db_path: str = DEFAULT_DB_PATH

    def __post_init__(self) -> None:
        self.precision = Fraction(self.precision)
        if self.base is not None:
            if len(self.base) != 2 or self.base[0] == self.base[1]:
                raise ConfigError(f"Base edge must be two distinct vertices, got {self.base}")
            self.base = (int(self.base[0]), int(self.base[1]))
        for name in ("seed", "range", "trials", "cap", "attempts", "workers"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.brute_force_cap < 0:
            raise ConfigError("brute_force_cap must not be negative")
        if self.precision <= 0:
            raise ConfigError("precision must be positive")
        if not 0 < self.tolerance < 1:
            raise ConfigError("tolerance must lie in (0, 1)")

    def to_profile(self) -> dict:
        """Settings worth storing as a named profile (everything but the graph)."""

        data = asdict(self)
        data.pop("graph_path")
        data["precision"] = str(self.precision)
        data["base"] = list(self.base) if self.base else None
        return data

    @classmethod
    def from_profile(cls, data: Mapping[str, object], **overrides: object) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        values = {key: value for key, value in data.items() if key in known}
        if values.get("base"):
            values["base"] = tuple(values["base"])
        if "precision" in values:
            values["precision"] = Fraction(str(values["precision"]))
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
