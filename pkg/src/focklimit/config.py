"""Model configuration: JSON schema, defaults (desk model D1) and validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .grids import GridError, build_momentum_grid, build_spatial_grid, parse_profile
from .kernels import QuadSpec

__all__ = ["ConfigError", "ModelConfig", "load_config", "DEFAULT_LAMBDAS"]

DEFAULT_LAMBDAS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)


class ConfigError(ValueError):
    """Invalid model configuration."""


def _default_fermion_grid() -> dict:
    return {"nodes": [[0.0, 0.0, 0.0]], "weights": [1.0]}


def _default_photon_grid() -> dict:
    return {"nodes": [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], "weights": [1.0, 1.0]}


def _default_spatial_grid() -> dict:
    return {"nodes": [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]], "weights": [1.0, 1.0]}


def _default_cutoffs() -> dict:
    return {"dirac": {"kind": "constant"}, "rad": {"kind": "constant"}, "spa": {"kind": "constant"}}


def _parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if isinstance(value, Mapping):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, complex):
        return value
    raise ConfigError(f"cannot read complex number from {value!r}")


@dataclass
class ModelConfig:
    """All run parameters.  Every field has a default; together they form model D1.

    D1: ``M = 1``, ``e = 0.5``, one fermion node at ``p = 0``, photon nodes
    ``(0, 0, +-1)``, spatial nodes ``(0, 0, 0)`` and ``(0, 0, 1)``, unit
    weights, all cutoffs 1 on the grid, ``n_max = 2`` (dimension 16 x 81).
    """

    mass: float = 1.0
    coupling: float = 0.5
    fermion_grid: dict = field(default_factory=_default_fermion_grid)
    photon_grid: dict = field(default_factory=_default_photon_grid)
    spatial_grid: dict = field(default_factory=_default_spatial_grid)
    cutoffs: dict = field(default_factory=_default_cutoffs)
    n_max: int = 2
    lambdas: list = field(default_factory=lambda: list(DEFAULT_LAMBDAS))
    z: complex = 1j
    t: float = 1.0
    tol: float = 1e-10
    dense_threshold: int = 4096
    seed: int = 20240611
    threads: int = 1
    out: str = "out"
    quadrature: dict = field(default_factory=lambda: {"radial": 64, "angular": 86})
    n_random_states: int = 50
    n_random_z: int = 100

    def validate(self) -> "ModelConfig":
        if not (isinstance(self.mass, (int, float)) and self.mass > 0 and math.isfinite(self.mass)):
            raise ConfigError(f"mass must be positive, got {self.mass!r}")
        if not math.isfinite(float(self.coupling)):
            raise ConfigError("coupling must be finite")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ConfigError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        self.n_max = int(self.n_max)
        if not self.lambdas:
            raise ConfigError("lambda schedule is empty")
        lam = [float(x) for x in self.lambdas]
        if any(not (x > 0) for x in lam):
            raise ConfigError(f"every Lambda must be > 0, got {self.lambdas!r}")
        if any(b <= a for a, b in zip(lam, lam[1:])):
            raise ConfigError("lambda schedule must be strictly increasing")
        self.lambdas = lam
        self.z = _parse_complex(self.z)
        if self.z.imag == 0.0:
            raise ConfigError(f"z must be non-real (Im z != 0), got z = {self.z}")
        if not self.tol > 0:
            raise ConfigError("solver tolerance must be positive")
        if int(self.threads) < 1:
            raise ConfigError("threads must be >= 1")
        if int(self.seed) < 0 or int(self.seed) >= 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        self.seed = int(self.seed)
        try:
            build_momentum_grid(self.fermion_grid)
            build_momentum_grid(self.photon_grid, photon=True)
            build_spatial_grid(self.spatial_grid)
            for key in ("dirac", "rad", "spa"):
                parse_profile(self.cutoffs.get(key, "constant"))
            QuadSpec(**self.quadrature)
        except (GridError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        unknown = set(self.cutoffs) - {"dirac", "rad", "spa"}
        if unknown:
            raise ConfigError(f"unknown cutoff keys {sorted(unknown)}")
        return self

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**dict(data))
        return cfg.validate()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["z"] = [self.z.real, self.z.imag]
        return out

    def quad_spec(self) -> QuadSpec:
        return QuadSpec(**self.quadrature)

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])


def load_config(path: str | Path | None) -> ModelConfig:
    if path is None:
        return ModelConfig().validate()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return ModelConfig.from_dict(data)
