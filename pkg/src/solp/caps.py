"""Search-size caps, overridable through the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass

AFP_CAP_DEFAULT = 20
CANDIDATE_CAP_DEFAULT = 10**6
ORACLE_CAP_DEFAULT = 22


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Caps:
    afp_atoms: int = AFP_CAP_DEFAULT
    candidates: int = CANDIDATE_CAP_DEFAULT
    oracle_universe: int = ORACLE_CAP_DEFAULT

    def __post_init__(self):
        for name in ("afp_atoms", "candidates", "oracle_universe"):
            if getattr(self, name) <= 0:
                raise ValueError(f"cap {name} must be positive")

    @classmethod
    def from_env(cls) -> "Caps":
        return cls(
            _env_int("SOLP_AFP_CAP", AFP_CAP_DEFAULT),
            _env_int("SOLP_CAND_CAP", CANDIDATE_CAP_DEFAULT),
            _env_int("SOLP_ORACLE_CAP", ORACLE_CAP_DEFAULT),
        )
