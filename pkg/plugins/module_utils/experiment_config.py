"""
Experiment configuration: YAML document -> validated ExperimentConfig.

The same keys are accepted as Ansible module options and as CLI flags;
missing keys take the desk-scale defaults below.

Example config:

    kind: table1
    valences: [4, 5, 6, 7, 8]
    levels: ["1/8", "1/16", "1/32", "1/64", "1/128"]
    samples: 100
    seed: 20240601
    schemes: [G1, G2, G5]
    output_format: csv
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction

import yaml
from jsonschema import Draft202012Validator

from .curvature_errors import ConfigError
from .curvature_schemes import ALL_SCHEMES, parse_schemes
from .geometry_core import VoronoiRule
from .synthesis import BUILTIN_SURFACES


class ExperimentKind(str, Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    PARALLELOGRAM = "parallelogram"
    COUNTEREXAMPLE = "counterexample"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


DEFAULT_LEVELS = (1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128)
DEFAULT_VALENCES = (4, 5, 6, 7, 8)
DEFAULT_SPHERE_SIZES = (30, 100, 400, 1300, 5000)
DEFAULT_COUNTEREXAMPLE_VALUES = (0.0, 0.5, 1.0, 1.5)
DEFAULT_SURFACES = ("paraboloid", "saddle", "sphere", "torus")
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 20240601

_LEVEL = {
    "oneOf": [
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "string", "pattern": r"^\s*\d+(\.\d*)?\s*(/\s*\d+(\.\d*)?\s*)?$"},
    ]
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": [k.value for k in ExperimentKind]},
        "valences": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 3, "maximum": 12}},
        "levels": {"type": "array", "minItems": 1, "items": _LEVEL},
        "samples": {"type": "integer", "minimum": 1},
        "sphere_sizes": {"type": "array", "minItems": 1,
                         "items": {"type": "integer", "minimum": 4, "maximum": 1000000}},
        "seed": {"type": "integer", "minimum": 0},
        "schemes": {"type": "array", "minItems": 1,
                    "items": {"type": "string", "pattern": "^[GgHh][1-5]$"}},
        "output_format": {"enum": [f.value for f in OutputFormat]},
        "voronoi_rule": {"enum": [r.value for r in VoronoiRule]},
        "counterexample_values": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "surfaces": {"type": "array", "minItems": 1, "items": {"enum": sorted(BUILTIN_SURFACES)}},
    },
}


def parse_level(value):
    """Accept 0.125, '0.125' or '1/8'."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.replace(" ", "")))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"invalid level '{value}'")
    return float(value)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: ExperimentKind
    valences: tuple = DEFAULT_VALENCES
    levels: tuple = DEFAULT_LEVELS
    samples: int = DEFAULT_SAMPLES
    sphere_sizes: tuple = DEFAULT_SPHERE_SIZES
    seed: int = DEFAULT_SEED
    schemes: tuple = ALL_SCHEMES
    output_format: OutputFormat = OutputFormat.CSV
    voronoi_rule: VoronoiRule = VoronoiRule.MIXED
    counterexample_values: tuple = DEFAULT_COUNTEREXAMPLE_VALUES
    surfaces: tuple = field(default=DEFAULT_SURFACES)

    def __post_init__(self):
        problems = []
        if not self.levels:
            problems.append("levels must not be empty")
        if any(not (math.isfinite(r) and r > 0) for r in self.levels):
            problems.append(f"levels must be positive: {list(self.levels)}")
        if any(b >= a for a, b in zip(self.levels, self.levels[1:])):
            problems.append(f"levels must be strictly decreasing: {list(self.levels)}")
        if not self.valences or any(not 3 <= n <= 12 for n in self.valences):
            problems.append(f"valences must be a non-empty subset of 3..12: {list(self.valences)}")
        if not self.sphere_sizes or any(not 4 <= n <= 1000000 for n in self.sphere_sizes):
            problems.append(f"sphere_sizes must be a non-empty subset of [4, 1000000]: {list(self.sphere_sizes)}")
        if self.samples < 1:
            problems.append(f"samples must be >= 1, got {self.samples}")
        if not self.schemes:
            problems.append("schemes must not be empty")
        if problems:
            raise ConfigError("invalid experiment configuration", problems)

    def with_overrides(self, **overrides):
        """Copy with the non-None overrides applied and re-normalised."""
        merged = self.to_dict()
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(merged)

    def to_dict(self):
        data = asdict(self)
        data["kind"] = self.kind.value
        data["output_format"] = self.output_format.value
        data["voronoi_rule"] = self.voronoi_rule.value
        data["schemes"] = [s.value for s in self.schemes]
        for key in ("valences", "levels", "sphere_sizes", "counterexample_values", "surfaces"):
            data[key] = list(data[key])
        return data


def validate(data):
    """Return a sorted list of schema violations ('path: message')."""
    validator = Draft202012Validator(CONFIG_SCHEMA)
    problems = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in error.absolute_path) or "<root>"
        problems.append(f"{where}: {error.message}")
    return problems


def build_config(data):
    """
    Validate a mapping and turn it into an ExperimentConfig.

    Raises:
        ConfigError: schema or semantic violations (all of them, in .problems)
    """
    if not isinstance(data, dict):
        raise ConfigError("experiment configuration must be a mapping", [f"got {type(data).__name__}"])
    problems = validate(data)
    if problems:
        raise ConfigError(f"experiment configuration has {len(problems)} problem(s)", problems)

    kwargs = {"kind": ExperimentKind(data["kind"])}
    if "valences" in data:
        kwargs["valences"] = tuple(int(n) for n in data["valences"])
    if "levels" in data:
        kwargs["levels"] = tuple(parse_level(r) for r in data["levels"])
    if "samples" in data:
        kwargs["samples"] = int(data["samples"])
    if "sphere_sizes" in data:
        kwargs["sphere_sizes"] = tuple(int(n) for n in data["sphere_sizes"])
    if "seed" in data:
        kwargs["seed"] = int(data["seed"])
    if "schemes" in data:
        try:
            kwargs["schemes"] = parse_schemes(data["schemes"])
        except ValueError as e:
            raise ConfigError("unknown scheme", [str(e)])
    if "output_format" in data:
        kwargs["output_format"] = OutputFormat(data["output_format"])
    if "voronoi_rule" in data:
        kwargs["voronoi_rule"] = VoronoiRule(data["voronoi_rule"])
    if "counterexample_values" in data:
        kwargs["counterexample_values"] = tuple(float(c) for c in data["counterexample_values"])
    if "surfaces" in data:
        kwargs["surfaces"] = tuple(data["surfaces"])
    return ExperimentConfig(**kwargs)


def load_config(path):
    """Read and validate a YAML experiment file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"config {path} is not valid YAML", [str(e)])
    return build_config(data)


def default_config(kind, **overrides):
    data = {"kind": ExperimentKind(kind).value}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(data)
