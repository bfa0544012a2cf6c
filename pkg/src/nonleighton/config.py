from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Optional


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    tree_radius: int = 2
    heights: tuple[int, int] = (-8, 8)
    k_rule: str = "corrected"
    sheets: tuple[int, int] = (3, 3)
    cert_max_factors: int = 4
    cert_max_conjugator: int = 6
    regenerate_certificates: bool = False
    out: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(self.heights))
        object.__setattr__(self, "sheets", tuple(self.sheets))
        self.validate()

    def validate(self) -> None:
        def is_int(x):
            return isinstance(x, int) and not isinstance(x, bool)

        if not is_int(self.tree_radius) or self.tree_radius < 0:
            raise ConfigError("tree_radius must be a nonnegative integer")
        if len(self.heights) != 2 or not all(map(is_int, self.heights)) or self.heights[0] >= self.heights[1]:
            raise ConfigError("heights must be two integers lo < hi")
        if self.k_rule not in ("literal", "corrected"):
            raise ConfigError("k_rule must be 'literal' or 'corrected'")
        if len(self.sheets) != 2 or not all(is_int(s) and s >= 1 for s in self.sheets):
            raise ConfigError("sheets must be two positive integers")
        if not (is_int(self.cert_max_factors) and is_int(self.cert_max_conjugator)):
            raise ConfigError("certificate bounds must be integers")
        if not isinstance(self.regenerate_certificates, bool):
            raise ConfigError("regenerate_certificates must be a boolean")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["heights"] = list(self.heights)
        d["sheets"] = list(self.sheets)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)
