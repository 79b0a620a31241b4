"""Scenario files for the command line.

A scenario is a YAML mapping::

    grid:       {n_points: 256, extent: 20.0, hbar: 1.0}
    pre_state:  {kind: coherent, x0: 1.0, p0: 2.0}     # or "coherent(1,2)"
    post_state: ground
    observable: "0.5*x^2 + 0.5*p^2"                    # or a name: H, H2, x, ...
    options:    {p0: 2.0, x_ref: 0.0, lambda_state: "coherent(1,0)", method: gr}
    output:     {dir: out, prefix: run}

Every key is optional.  Relative ``custom_csv`` paths resolve against the
scenario file's directory.  ``hbar`` defaults to ``$WEAKWIGNER_HBAR`` or 1.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .errors import ConfigError, InvalidGrid
from .grid import SpatialGrid, make_grid
from .states import StateSpec, parse_state

HBAR_ENV = "WEAKWIGNER_HBAR"
TOP_KEYS = {"grid", "pre_state", "post_state", "observable", "options", "output"}
GRID_KEYS = {"n_points", "extent", "hbar"}
OPTION_KEYS = {"p0", "x_ref", "lambda_state", "method", "route", "force"}
OUTPUT_KEYS = {"dir", "prefix"}
DEFAULT_GRID = {"n_points": 256, "extent": 20.0}


def default_hbar() -> float:
    raw = os.environ.get(HBAR_ENV)
    if raw is None or raw == "":
        return 1.0
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"{HBAR_ENV} must be a positive number, got {raw!r}") from None
    if not val > 0:
        raise ConfigError(f"{HBAR_ENV} must be a positive number, got {raw!r}")
    return val


def _state_spec(value, base: Path | None, where: str) -> StateSpec:
    if isinstance(value, str):
        spec = parse_state(value)
    elif isinstance(value, dict):
        spec = StateSpec.from_dict(value)
    else:
        raise ConfigError(f"{where}: expected a state mapping or string, got {value!r}")
    if spec.kind == "custom_csv":
        path = Path(str(spec.params.get("path", "")))
        if base is not None and not path.is_absolute():
            path = base / path
        if not path.is_file():
            raise ConfigError(f"{where}: state file {path} does not exist")
        spec = StateSpec("custom_csv", {**spec.params, "path": str(path)})
    return spec


def _check_keys(d: dict, allowed: set, where: str) -> None:
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


@dataclass(frozen=True)
class ScenarioConfig:
    n_points: int = DEFAULT_GRID["n_points"]
    extent: float = DEFAULT_GRID["extent"]
    hbar: float = 1.0
    pre_state: StateSpec | None = None
    post_state: StateSpec | None = None
    observable: str | None = None
    options: dict = field(default_factory=dict)
    output_dir: str = "."
    prefix: str | None = None

    @classmethod
    def from_mapping(cls, data: dict | None, base: Path | None = None) -> "ScenarioConfig":
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a mapping at top level")
        _check_keys(data, TOP_KEYS, "scenario")
        grid = data.get("grid") or {}
        if not isinstance(grid, dict):
            raise ConfigError("grid: expected a mapping")
        _check_keys(grid, GRID_KEYS, "grid")
        opts = data.get("options") or {}
        if not isinstance(opts, dict):
            raise ConfigError("options: expected a mapping")
        _check_keys(opts, OPTION_KEYS, "options")
        out = data.get("output") or {}
        if not isinstance(out, dict):
            raise ConfigError("output: expected a mapping")
        _check_keys(out, OUTPUT_KEYS, "output")
        try:
            n = grid.get("n_points", DEFAULT_GRID["n_points"])
            if isinstance(n, bool) or int(n) != n:
                raise ValueError(f"n_points must be an integer, got {n!r}")
            cfg = cls(
                n_points=int(n),
                extent=float(grid.get("extent", DEFAULT_GRID["extent"])),
                hbar=float(grid["hbar"]) if "hbar" in grid else default_hbar(),
                pre_state=_state_spec(data["pre_state"], base, "pre_state") if "pre_state" in data else None,
                post_state=_state_spec(data["post_state"], base, "post_state") if "post_state" in data else None,
                observable=None if data.get("observable") is None else str(data["observable"]),
                options=dict(opts),
                output_dir=str(out.get("dir", ".")),
                prefix=None if out.get("prefix") is None else str(out["prefix"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"grid: {exc}") from None
        if "lambda_state" in opts:
            _state_spec(opts["lambda_state"], base, "options.lambda_state")
        if base is not None and not Path(cfg.output_dir).is_absolute():
            cfg = replace(cfg, output_dir=str(base / cfg.output_dir))
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
        return cls.from_mapping(data, base=path.parent)

    def with_grid(self, spec: str) -> "ScenarioConfig":
        """Apply a ``N,extent`` override."""
        parts = spec.split(",")
        try:
            if len(parts) != 2:
                raise ValueError
            n = int(parts[0])
            ext = float(parts[1])
        except ValueError:
            raise ConfigError(f"--grid expects N,extent (e.g. 256,20), got {spec!r}") from None
        return replace(self, n_points=n, extent=ext)

    def grid(self) -> SpatialGrid:
        try:
            return make_grid(self.n_points, self.extent, self.hbar)
        except InvalidGrid as exc:
            raise ConfigError(f"grid: {exc}") from None

    def lambda_spec(self, base: Path | None = None) -> StateSpec | None:
        val = self.options.get("lambda_state")
        return None if val is None else _state_spec(val, base, "options.lambda_state")
