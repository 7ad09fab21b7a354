"""Declarative experiment configuration, loaded from JSON with snake_case keys."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..coefficients import LAWS
from ..errors import InvalidArgumentError
from ..metrics import METRICS

KINDS = ("zero-count-law", "rate-curve", "validate", "theta-convergence")


@dataclass
class ExperimentConfig:
    kind: str
    laws: list[str] = field(default_factory=lambda: ["gaussian"])
    m_values: list[int] = field(default_factory=lambda: [100])
    surrogate_M: int = 2000
    n_reps: int = 1000
    interval: tuple[float, float] = (0.0, 1.0)
    delta: float | None = None
    eps: float | None = None
    metric: str = "W1"
    bootstrap_B: int = 200
    master_seed: int = 0
    output_path: str = "results.csv"

    def __post_init__(self):
        self.laws = list(self.laws)
        self.m_values = [int(m) for m in self.m_values]
        self.interval = tuple(float(v) for v in self.interval)
        self.validate()

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"kind must be one of {KINDS}, got {self.kind!r}")
        unknown = [law for law in self.laws if law not in LAWS]
        if unknown:
            raise InvalidArgumentError(f"unknown laws {unknown}; expected names from {sorted(LAWS)}")
        if self.kind != "validate":
            if not self.m_values:
                raise InvalidArgumentError("m_values must not be empty")
            if any(m < 1 for m in self.m_values):
                raise InvalidArgumentError("m_values must be positive")
        if self.kind == "rate-curve" and any(b <= a for a, b in zip(self.m_values, self.m_values[1:])):
            raise InvalidArgumentError("m_values must be strictly increasing for a rate curve")
        if self.kind in ("zero-count-law", "rate-curve") and not self.laws:
            raise InvalidArgumentError("laws must not be empty")
        if self.n_reps < 1:
            raise InvalidArgumentError("n_reps must be at least 1")
        if self.surrogate_M < 2:
            raise InvalidArgumentError("surrogate_M must be at least 2")
        if len(self.interval) != 2 or not 0.0 <= self.interval[0] < self.interval[1] <= 1.0:
            raise InvalidArgumentError("interval must satisfy 0 <= a < b <= 1")
        for name in ("delta", "eps"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InvalidArgumentError(f"{name} must be positive when given")
        if self.eps is not None and self.delta is None:
            raise InvalidArgumentError("eps requires delta")
        if self.metric not in METRICS:
            raise InvalidArgumentError(f"metric must be one of {METRICS}")
        if self.bootstrap_B < 100:
            raise InvalidArgumentError("bootstrap_B must be at least 100")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidArgumentError("master_seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        extra = sorted(set(data) - names)
        if extra:
            raise InvalidArgumentError(f"unknown config keys: {extra}")
        if "kind" not in data:
            raise InvalidArgumentError("config needs a 'kind'")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InvalidArgumentError("config file must hold a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
