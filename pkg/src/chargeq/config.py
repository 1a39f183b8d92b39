"""Scenario and sweep configuration, loaded from flat JSON and/or CLI flags."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .dynamics import FieldSpec, ModelParams
from .measures import OptimizerConfig

NAMED_INITIAL = {
    "ee": (1.0, 0.0, 1.0, 0.0),
    "gg": (0.0, 1.0, 0.0, 1.0),
}
MEASURE_GROUPS = ("correlations", "deficits")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key and line."""


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


@dataclass(frozen=True)
class ScenarioConfig:
    delta_over_lambda: float = 0.5
    field: str = "coherent"
    nbar: float = 10.0
    fock_n: int = 0
    initial: str = "ee"
    a1: complex = 1.0
    b1: complex = 0.0
    a2: complex = 1.0
    b2: complex = 0.0
    tau_max: float = 25.0
    steps: int = 251
    epsilon_truncation: float = 1e-12
    opt_tolerance: float = 1e-6
    opt_max_evals: int = 20_000
    opt_seed: int = 12345
    opt_grid_starts: int = 16
    opt_random_starts: int = 4
    measures: tuple[str, ...] = MEASURE_GROUPS
    out: str | None = None

    def __post_init__(self):
        if self.steps < 2:
            raise ConfigError("steps: must be >= 2")
        if not self.tau_max > 0:
            raise ConfigError("tau_max: must be > 0")
        if self.field not in ("coherent", "fock"):
            raise ConfigError(f"field: expected 'coherent' or 'fock', got {self.field!r}")
        if self.field == "coherent" and self.nbar < 0:
            raise ConfigError("nbar: must be >= 0")
        if self.field == "fock" and self.fock_n < 0:
            raise ConfigError("fock_n: must be >= 0")
        if not 0 < self.epsilon_truncation < 1:
            raise ConfigError("epsilon_truncation: must lie in (0, 1)")
        if self.initial not in (*NAMED_INITIAL, "custom"):
            raise ConfigError(f"initial: expected ee, gg or custom, got {self.initial!r}")
        bad = [m for m in self.measures if m not in MEASURE_GROUPS]
        if bad:
            raise ConfigError(f"measures: unknown entries {bad}; choose from {list(MEASURE_GROUPS)}")
        if self.initial in NAMED_INITIAL:
            for k, v in zip(("a1", "b1", "a2", "b2"), NAMED_INITIAL[self.initial]):
                object.__setattr__(self, k, complex(v))
        else:
            for k in ("a1", "b1", "a2", "b2"):
                object.__setattr__(self, k, _complex(getattr(self, k)))
            for a, b, name in ((self.a1, self.b1, "a1/b1"), (self.a2, self.b2, "a2/b2")):
                if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-10:
                    raise ConfigError(f"{name}: qubit amplitudes must be normalized")
        object.__setattr__(self, "measures", tuple(self.measures))

    @property
    def field_spec(self) -> FieldSpec:
        if self.field == "fock":
            return FieldSpec.fock(self.fock_n)
        return FieldSpec.coherent(self.nbar, self.epsilon_truncation)

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.delta_over_lambda, self.field_spec, self.a1, self.b1, self.a2, self.b2)

    @property
    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            tolerance=self.opt_tolerance,
            max_evals=self.opt_max_evals,
            seed=self.opt_seed,
            grid_starts=self.opt_grid_starts,
            random_starts=self.opt_random_starts,
        )

    @property
    def taus(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.steps)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        for k in ("a1", "b1", "a2", "b2"):
            d[k] = [d[k].real, d[k].imag]
        d["measures"] = list(self.measures)
        return d

    def digest(self) -> str:
        d = self.to_json_dict()
        d.pop("out")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


SCENARIO_KEYS = {f.name for f in fields(ScenarioConfig)}


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _coerce(key: str, value, line: int | None):
    typ = {f.name: f.type for f in fields(ScenarioConfig)}[key]
    where = f" (line {line})" if line else ""
    try:
        if typ == "float":
            return float(value)
        if typ == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError("not an integer")
            return int(value)
        if key == "measures":
            if isinstance(value, str):
                value = [v for v in value.split(",") if v]
            return tuple(value)
        return value
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}{where}: {exc}") from None


def read_json(path: str | Path) -> tuple[dict, str]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: line 1: top level must be a JSON object")
    return data, text


def scenario_from_mapping(data: dict, text: str = "", source: str = "config") -> ScenarioConfig:
    kwargs = {}
    for key, value in data.items():
        line = _line_of(text, key)
        if key not in SCENARIO_KEYS:
            where = f"line {line}: " if line else ""
            raise ConfigError(f"{source}: {where}unknown key {key!r}")
        kwargs[key] = _coerce(key, value, line)
    try:
        return ScenarioConfig(**kwargs)
    except ConfigError as exc:
        key = str(exc).split(":", 1)[0].split("/")[0]
        line = _line_of(text, key)
        prefix = f"{source}: line {line}: " if line else f"{source}: "
        raise ConfigError(prefix + str(exc)) from None


def load_scenario(path: str | Path | None = None, **overrides) -> ScenarioConfig:
    """Config file values, then non-None ``overrides`` on top."""
    data, text = ({}, "") if path is None else read_json(path)
    over = {k: v for k, v in overrides.items() if v is not None}
    cfg = scenario_from_mapping(data, text, str(path or "config"))
    if over:
        merged = {**cfg.to_json_dict(), **over}
        # named initial states overwrite amplitudes, custom keeps them
        cfg = scenario_from_mapping(merged, "", "flags")
    return cfg


@dataclass(frozen=True)
class SweepConfig:
    deltas: tuple[float, ...]
    nbars: tuple[float, ...]
    initials: tuple[str, ...]
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    out_dir: str = "results"

    def __post_init__(self):
        for name in ("deltas", "nbars", "initials"):
            if not getattr(self, name):
                raise ConfigError(f"{name}: must be a non-empty list")

    def combinations(self) -> list[tuple[str, ScenarioConfig]]:
        out = []
        for d in self.deltas:
            for nb in self.nbars:
                for ini in self.initials:
                    cfg = replace(self.base, delta_over_lambda=float(d), nbar=float(nb),
                                  initial=ini, out=None)
                    out.append((f"d{d:g}_n{nb:g}_{ini}.csv", cfg))
        return out


def load_sweep(path: str | Path, out_dir: str | None = None) -> SweepConfig:
    data, text = read_json(path)
    known = {"deltas", "nbars", "initials", "base", "out_dir"}
    for key in data:
        if key not in known:
            raise ConfigError(f"{path}: line {_line_of(text, key)}: unknown key {key!r}")
    base = scenario_from_mapping(data.get("base", {}), text, str(path))
    try:
        return SweepConfig(
            deltas=tuple(float(x) for x in data.get("deltas", ())),
            nbars=tuple(float(x) for x in data.get("nbars", ())),
            initials=tuple(str(x) for x in data.get("initials", ())),
            base=base,
            out_dir=out_dir or data.get("out_dir", "results"),
        )
    except ConfigError as exc:
        key = str(exc).split(":", 1)[0]
        raise ConfigError(f"{path}: line {_line_of(text, key)}: {exc}") from None
