"""Engine configuration: genus, prime p, auxiliary integer c, level bound, seed."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace
from math import gcd


@dataclass(frozen=True)
class EngineConfig:
    genus: int = 1
    p: int = 5
    c: int = 2
    level_bound: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError("p must be prime")
        if self.c <= 1 or gcd(self.c, self.p) != 1:
            raise ValueError("need c > 1 with gcd(c, p) = 1")

    @property
    def cp(self) -> int:
        return self.c * self.p

    def admissible_level(self, N: int) -> bool:
        return N >= 3 and gcd(N, self.cp) == 1

    def check_level(self, N: int) -> None:
        if not self.admissible_level(N):
            raise ValueError(f"level {N} is not admissible for cp={self.cp}")
        if N > self.level_bound:
            raise ValueError(f"level {N} exceeds the configured bound {self.level_bound}")

    def with_overrides(self, **kw) -> "EngineConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def load(cls, path: str | None = None) -> "EngineConfig":
        """Defaults, overridden by the JSON file named in ENGINE_CONFIG (or ``path``)."""
        path = path or os.environ.get("ENGINE_CONFIG")
        if not path:
            return cls()
        with open(path) as fh:
            data = json.load(fh)
        return cls(**{k: data[k] for k in ("genus", "p", "c", "level_bound", "seed") if k in data})


DEFAULT = EngineConfig()
