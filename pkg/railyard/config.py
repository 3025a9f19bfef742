"""
Experiment documents.

One JSON document describes a run: the model (an explicit finite graph or a
periodic asymptotic model), the left boundary, the task parameters and
where outputs go. Everything is parsed into frozen dataclasses, and
``to_json`` writes a document that parses back to an equal config.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Tuple

import numpy as np

from .errors import ConfigError, RailYardError
from .graph import RailYardSpec, build
from .model import AsymptoticModel, Realization, realize
from .partitions import Partition, make_partition
from .piecewise import PiecewiseBoundary

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
BOUNDARY_KINDS = ("empty", "staircase", "piecewise")


@dataclass(frozen=True)
class FiniteModelConfig:
    l: int
    r: int
    a: str
    b: str
    x: Tuple[float, ...]

    def build(self) -> RailYardSpec:
        return build(self.l, self.r, list(self.a), list(self.b), self.x)

    def to_dict(self) -> dict:
        return {"finite": {"l": self.l, "r": self.r, "a": self.a, "b": self.b, "x": list(self.x)}}


@dataclass(frozen=True)
class PeriodicModelConfig:
    model: AsymptoticModel
    periods: int = 20

    def realize(self) -> Realization:
        return realize(self.model, self.periods)

    def to_dict(self) -> dict:
        return {"periodic": {**self.model.to_dict(), "periods": self.periods}}


@dataclass(frozen=True)
class BoundaryConfig:
    kind: str = "empty"
    M: int = 1
    left: Partition = ()
    a: Tuple[float, ...] = ()
    b: Tuple[float, ...] = ()
    rows: int | None = None

    @property
    def empty(self) -> bool:
        """True when the left boundary partition is ∅ in every realisation."""
        return not self.left and (self.kind == "empty" or (self.kind == "staircase" and self.M == 1))

    def piecewise(self) -> PiecewiseBoundary:
        if self.kind != "piecewise":
            raise ConfigError(f"boundary is {self.kind!r}, not piecewise")
        return PiecewiseBoundary(self.a, self.b)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "staircase":
            out["M"] = self.M
        if self.left:
            out["left"] = list(self.left)
        if self.kind == "piecewise":
            out["a"], out["b"] = list(self.a), list(self.b)
            if self.rows is not None:
                out["rows"] = self.rows
        return out


@dataclass(frozen=True)
class TaskConfig:
    t: int | None = None
    chi: float | None = None
    orders: Tuple[int, ...] = (1, 2, 3)
    kappa: Tuple[float, float, int] = (0.0, 1.0, 101)
    u_points: int = 2000
    samples: int = 1000
    seed: int | None = None
    cap: int = 40
    max_size: int = 6

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("sampling tasks need task.seed")
        return self.seed

    def kappa_grid(self) -> np.ndarray:
        lo, hi, n = self.kappa
        return np.linspace(lo, hi, int(n))

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        out["orders"], out["kappa"] = list(self.orders), list(self.kappa)
        return out


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    prefix: str = ""
    png: bool = False

    def path(self, name: str, suffix: str) -> Path:
        stem = f"{self.prefix}_{name}" if self.prefix else name
        return Path(self.directory) / f"{stem}.{suffix}"


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    model: FiniteModelConfig | PeriodicModelConfig
    boundary: BoundaryConfig = field(default_factory=BoundaryConfig)
    task: TaskConfig = field(default_factory=TaskConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    schema_version: int = SCHEMA_VERSION

    @property
    def periodic(self) -> bool:
        return isinstance(self.model, PeriodicModelConfig)

    def asymptotic(self) -> AsymptoticModel:
        if not isinstance(self.model, PeriodicModelConfig):
            raise ConfigError(f"{self.name}: this command needs a periodic model")
        return self.model.model

    def require_empty_boundary(self, what: str) -> None:
        if not self.boundary.empty:
            raise ConfigError(f"{self.name}: {what} supports only the empty left boundary, got {self.boundary.kind!r}")

    def spec(self) -> RailYardSpec:
        """Finite graph, realising a periodic model if needed."""
        if isinstance(self.model, FiniteModelConfig):
            return self.model.build()
        return self.model.realize().spec

    def with_overrides(self, seed: int | None = None, cap: int | None = None, out: str | None = None, png: bool | None = None) -> "ExperimentConfig":
        task, output = self.task, self.output
        if seed is not None:
            task = replace(task, seed=seed)
        if cap is not None:
            task = replace(task, cap=cap)
        if out is not None:
            output = replace(output, directory=out)
        if png is not None:
            output = replace(output, png=png)
        return replace(self, task=task, output=output)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "model": self.model.to_dict(),
            "boundary": self.boundary.to_dict(),
            "task": self.task.to_dict(),
            "output": asdict(self.output),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")
        try:
            return cls(
                name=str(data.get("name", "experiment")),
                model=_model(data["model"]),
                boundary=_boundary(data.get("boundary", {})),
                task=_task(data.get("task", {})),
                output=OutputConfig(**data.get("output", {})),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError, RailYardError) as exc:
            raise ConfigError(f"invalid experiment document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"not a JSON document: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("experiment document must be a JSON object")
        return cls.from_dict(data)


def _model(data: Mapping[str, Any]) -> FiniteModelConfig | PeriodicModelConfig:
    forms = [k for k in ("finite", "periodic") if k in data]
    if len(forms) != 1:
        raise ConfigError(f"model needs exactly one of 'finite' or 'periodic', got {sorted(data)}")
    if forms[0] == "finite":
        f = data["finite"]
        cfg = FiniteModelConfig(int(f["l"]), int(f["r"]), str(f["a"]), str(f["b"]), tuple(float(v) for v in f["x"]))
        cfg.build()
        return cfg
    p = dict(data["periodic"])
    periods = int(p.pop("periods", 20))
    return PeriodicModelConfig(AsymptoticModel.from_dict(p), periods)


def _boundary(data: Mapping[str, Any]) -> BoundaryConfig:
    kind = str(data.get("kind", "empty"))
    if kind not in BOUNDARY_KINDS:
        raise ConfigError(f"boundary kind must be one of {BOUNDARY_KINDS}, got {kind!r}")
    cfg = BoundaryConfig(
        kind=kind,
        M=int(data.get("M", 1)),
        left=make_partition(data.get("left", ())),
        a=tuple(float(v) for v in data.get("a", ())),
        b=tuple(float(v) for v in data.get("b", ())),
        rows=int(data["rows"]) if "rows" in data else None,
    )
    if cfg.M < 1:
        raise ConfigError(f"staircase M must be positive, got {cfg.M}")
    if kind == "piecewise":
        cfg.piecewise()
    return cfg


def _task(data: Mapping[str, Any]) -> TaskConfig:
    unknown = set(data) - set(TaskConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown task fields {sorted(unknown)}")
    values = dict(data)
    if "orders" in values:
        values["orders"] = tuple(int(k) for k in values["orders"])
    if "kappa" in values:
        lo, hi, n = values["kappa"]
        values["kappa"] = (float(lo), float(hi), int(n))
    cfg = TaskConfig(**values)
    if cfg.t is not None and cfg.chi is not None:
        raise ConfigError("give task.t or task.chi, not both")
    if cfg.cap < 1 or cfg.samples < 1:
        raise ConfigError(f"cap and samples must be positive, got cap={cfg.cap}, samples={cfg.samples}")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    cfg = ExperimentConfig.from_json(text)
    logger.debug("loaded %s from %s", cfg.name, path)
    return cfg
