"""Run configuration files (JSON or YAML).

Complex numbers are written as ``[re, im]`` pairs; plain numbers are read as real.
Relative paths resolve against the directory holding the config file.
"""

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ._validation import TAU_SYMP
from .basis import InterpolationSet
from .reduction import METHODS, TOL_INTERP

DEFAULT_SWEEP = {"min": 1e-2, "max": 1e2, "points_per_decade": 50}
DEFAULT_SIMULATE = {"dt": 1e-3, "steps": 10000, "input": "step", "target": "reduced"}
INPUTS = ("step", "zero", "impulse")
TARGETS = ("full", "reduced")
TOLERANCE_KEYS = ("struct", "symp", "interp")
GENERATORS = ("msd_chain", "random")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def parse_complex(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex numbers are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (int, float)):
        return complex(float(value))
    raise ConfigError(f"cannot read {value!r} as a complex number")


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def _parse_vector(value):
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"a direction must be a list, got {value!r}")
    return [parse_complex(v) for v in value]


@dataclass
class RunConfig:
    system: str = None
    generate: dict = None
    points: list = field(default_factory=list)
    directions: object = "canonical"
    method: str = "dissipative"
    sweep: dict = field(default_factory=lambda: dict(DEFAULT_SWEEP))
    simulate: dict = field(default_factory=lambda: dict(DEFAULT_SIMULATE))
    tolerances: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    output_dir: str = "out"
    base_dir: Path = field(default=Path("."), repr=False, compare=False)

    @property
    def system_path(self):
        if self.system is None:
            return self.output_path / "system"
        return (self.base_dir / self.system).resolve()

    @property
    def output_path(self):
        return (self.base_dir / self.output_dir).resolve()

    @property
    def tol_struct(self):
        return self.tolerances.get("struct")

    @property
    def tol_symp(self):
        return self.tolerances.get("symp", TAU_SYMP)

    @property
    def tol_interp(self):
        return self.tolerances.get("interp", TOL_INTERP)

    def interpolation_set(self, p):
        """Build the :class:`InterpolationSet`, enforcing ``p + M`` even for symplectic methods."""
        if not self.points:
            raise ConfigError("config lists no interpolation points")
        self.check_parity(p)
        if self.directions == "canonical":
            return InterpolationSet.canonical(self.points, p)
        dirs = np.array(self.directions, dtype=np.complex128)
        if dirs.shape != (len(self.points), p):
            raise ConfigError(f"directions must be {len(self.points)} vectors of length {p}, got shape {dirs.shape}")
        try:
            return InterpolationSet(self.points, dirs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def check_parity(self, p):
        if self.method != "baseline" and (p + len(self.points)) % 2:
            raise ConfigError(
                f"p + M = {p} + {len(self.points)} is odd; the symplectic methods need an even "
                "reduced dimension: add or remove one interpolation point"
            )

    def semantic_dict(self):
        """Fields that influence results, normalized (``output_dir`` excluded)."""
        dirs = self.directions
        if dirs != "canonical":
            dirs = [[encode_complex(v) for v in row] for row in dirs]
        return {
            "system": self.system,
            "generate": self.generate,
            "points": [encode_complex(z) for z in self.points],
            "directions": dirs,
            "method": self.method,
            "sweep": self.sweep,
            "simulate": self.simulate,
            "tolerances": self.tolerances,
            "options": self.options,
        }

    def config_hash(self):
        blob = json.dumps(self.semantic_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def config_from_dict(raw, base_dir="."):
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    known = {"system", "generate", "points", "directions", "method", "sweep", "simulate", "tolerances", "options", "output_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    raw = copy.deepcopy(raw)

    method = raw.get("method", "dissipative")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    points = [parse_complex(z) for z in raw.get("points", [])]
    directions = raw.get("directions", "canonical")
    if directions != "canonical":
        if not isinstance(directions, list) or len(directions) != len(points):
            raise ConfigError("directions must be 'canonical' or one vector per point")
        directions = [_parse_vector(d) for d in directions]

    sweep = {**DEFAULT_SWEEP, **raw.get("sweep", {})}
    for key in ("min", "max", "points_per_decade"):
        sweep[key] = _positive(f"sweep.{key}", sweep[key])
    if sweep["max"] <= sweep["min"]:
        raise ConfigError("sweep.max must exceed sweep.min")

    simulate = {**DEFAULT_SIMULATE, **raw.get("simulate", {})}
    simulate["dt"] = _positive("simulate.dt", simulate["dt"])
    simulate["steps"] = int(_positive("simulate.steps", simulate["steps"]))
    if simulate["input"] not in INPUTS:
        raise ConfigError(f"simulate.input must be one of {INPUTS}")
    if simulate["target"] not in TARGETS:
        raise ConfigError(f"simulate.target must be one of {TARGETS}")

    tolerances = raw.get("tolerances", {})
    for key, value in tolerances.items():
        if key not in TOLERANCE_KEYS:
            raise ConfigError(f"unknown tolerance {key!r}; expected one of {TOLERANCE_KEYS}")
        tolerances[key] = _positive(f"tolerances.{key}", value)

    generate = raw.get("generate")
    if generate is not None:
        if not isinstance(generate, dict) or generate.get("kind") not in GENERATORS:
            raise ConfigError(f"generate.kind must be one of {GENERATORS}")

    options = raw.get("options", {})
    allowed = {"lossless_resolvent", "J_small", "orthonormalize"}
    if set(options) - allowed:
        raise ConfigError(f"unknown options {sorted(set(options) - allowed)}")

    cfg = RunConfig(
        system=raw.get("system"),
        generate=generate,
        points=points,
        directions=directions,
        method=method,
        sweep=sweep,
        simulate=simulate,
        tolerances=tolerances,
        options=options,
        output_dir=str(raw.get("output_dir", "out")),
        base_dir=Path(base_dir),
    )
    p = _known_p(cfg)
    if p is not None:
        cfg.check_parity(p)
    return cfg


def _known_p(cfg):
    if cfg.directions != "canonical" and cfg.directions:
        return len(cfg.directions[0])
    if cfg.generate is not None:
        if cfg.generate["kind"] == "random":
            return int(cfg.generate.get("p", 1))
        return len(cfg.generate.get("forced", [None]))
    meta = cfg.system_path / "system.json" if cfg.system_path.is_dir() else cfg.system_path
    if meta.is_file():
        try:
            return json.loads(meta.read_text()).get("p")
        except (OSError, json.JSONDecodeError):
            return None
    return None


def load_config(path):
    """Read a JSON (``.json``) or YAML config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return config_from_dict(raw, base_dir=path.parent)
