"""
Data processing utilities for the semigroup contour-quadrature toolkit.

Experiment configs are INI files read with configparser and validated into
an ExperimentConfig; resolvent sample sets are checkpointed as CSV through
pandas.
"""

import configparser
import logging
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config import (
    COST_MAX_DEGREE,
    CSV_HEADER_PREFIX,
    EXAMPLE_PRESETS,
    KNOWN_KEYS,
    REQUIRED_KEYS,
    VERSION,
)
from utils.bounds import SemigroupConstants
from utils.contour import NodeSample, ResolventSampleSet, STRATEGIES
from utils.errors import ConfigError, DomainError
from utils.hypergeo import check_order
from utils.params import ContourPlan

logger = logging.getLogger(__name__)

AUTO = "auto"
OPTIMAL = "optimal"
SWEEP_KINDS = ("nodes", "pole", "plan")
NORM_MODELS = ("unit", "typical", "smooth", "pole")


@dataclass
class SweepSettings:
    """Parameter sweeps used by the bounds, converge and contour-cost commands"""

    kind: str = "nodes"
    n_values: Optional[List[int]] = None
    a_values: Optional[List[float]] = None
    m_values: Optional[List[int]] = None
    t: Optional[float] = None
    t_points: int = 51
    graph_norm: Optional[float] = None
    norm_model: str = "unit"
    epsilons: Optional[List[float]] = None
    deltas: Optional[List[float]] = None
    tolerances: List[float] = field(default_factory=lambda: [1e-4, 1e-8])
    profile_deltas: List[float] = field(default_factory=lambda: [2.0, 5.0, 10.0])
    error_floor: float = 1e-12
    max_degree: int = COST_MAX_DEGREE


@dataclass
class ExperimentConfig:
    """Validated experiment description"""

    example: Union[int, str]
    m: int
    delta: float
    h: Optional[Union[float, str]] = None
    n_half: Optional[Union[int, str]] = None
    t_max: Optional[float] = None
    epsilon: Optional[float] = None
    pole_offset: Optional[float] = None
    strategy: str = "pre"
    M: float = 1.0
    symmetry: bool = True
    resolution: Optional[Union[int, Tuple[int, int]]] = None
    half_width: Optional[float] = None
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output_directory: Optional[str] = None
    checkpoint: Optional[str] = None
    solution: bool = False

    def __post_init__(self):
        validate_config(self)

    @property
    def constants(self) -> SemigroupConstants:
        return SemigroupConstants(M=self.M)

    @property
    def is_custom(self) -> bool:
        return self.example == "custom"

    @property
    def sweep_time(self) -> float:
        """Time at which bound sweeps are evaluated"""
        t = self.sweep.t if self.sweep.t is not None else self.t_max
        if t is None:
            raise ConfigError("sweep time: set [sweep] t or [scheme] t_max")
        return t


def validate_config(config: ExperimentConfig) -> None:
    """Raise ConfigError for inconsistent settings"""
    if config.example not in (1, 2, 3, 4, "custom"):
        raise ConfigError(f"unknown example {config.example!r}; expected 1-4 or custom")
    try:
        check_order(config.m)
    except DomainError as exc:
        raise ConfigError(f"[scheme] m: {exc}") from exc
    for name in ("delta", "t_max", "epsilon", "pole_offset", "half_width"):
        value = getattr(config, name)
        if value is not None and (not math.isfinite(value) or value <= 0):
            raise ConfigError(f"{name} must be positive, got {value}")
    if config.M < 1:
        raise ConfigError(f"M must be >= 1, got {config.M}")
    if config.h == AUTO or config.n_half == AUTO:
        if config.epsilon is None or config.t_max is None:
            raise ConfigError("h = auto or n = auto needs both epsilon and t_max")
    if config.h == OPTIMAL and config.n_half in (AUTO, None):
        raise ConfigError("h = optimal needs an explicit node count n")
    if isinstance(config.h, str) and config.h not in (AUTO, OPTIMAL):
        raise ConfigError(f"h must be a number, auto or optimal, got {config.h!r}")
    if isinstance(config.h, (int, float)) and config.h <= 0:
        raise ConfigError(f"h must be positive, got {config.h}")
    if isinstance(config.n_half, str) and config.n_half != AUTO:
        raise ConfigError(f"n must be an integer or auto, got {config.n_half!r}")
    if isinstance(config.n_half, int) and config.n_half < 1:
        raise ConfigError(f"n must be >= 1, got {config.n_half}")
    if config.strategy not in STRATEGIES:
        raise ConfigError(f"strategy must be one of {STRATEGIES}, got {config.strategy!r}")
    if config.pole_offset is not None and config.m != 2:
        raise ConfigError("pole_offset selects the second-order scheme and needs m = 2")
    if config.sweep.kind not in SWEEP_KINDS:
        raise ConfigError(f"sweep kind must be one of {SWEEP_KINDS}, got {config.sweep.kind!r}")
    if config.sweep.norm_model not in NORM_MODELS:
        raise ConfigError(f"norm_model must be one of {NORM_MODELS}, got {config.sweep.norm_model!r}")
    if config.sweep.t_points < 1:
        raise ConfigError(f"t_points must be >= 1, got {config.sweep.t_points}")
    if config.sweep.max_degree < 8:
        raise ConfigError(f"max_degree must be >= 8, got {config.sweep.max_degree}")


def _convert(section: str, key: str, raw: str, kind):
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {kind.__name__}") from exc


def _parse_list(section: str, key: str, raw: str, kind) -> list:
    return [_convert(section, key, item.strip(), kind) for item in raw.split(",") if item.strip()]


def _parse_integer(section: str, key: str, raw: str) -> int:
    value = _convert(section, key, raw, float)
    if not value.is_integer():
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer")
    return int(value)


def _parse_resolution(raw: str) -> Union[int, Tuple[int, int]]:
    values = _parse_list("discretization", "resolution", raw.replace("x", ","), int)
    if len(values) == 1:
        return values[0]
    if len(values) == 2:
        return tuple(values)
    raise ConfigError(f"[discretization] resolution = {raw!r} must be n or n1 x n2")


def read_config_file(path: str) -> configparser.ConfigParser:
    """Read an INI config, keeping key case and checking section/key names"""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from exc

    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        unknown = [key for key in parser[section] if key not in KNOWN_KEYS[section]]
        if unknown:
            raise ConfigError(f"unknown keys in [{section}]: {', '.join(unknown)}")
    for section, keys in REQUIRED_KEYS.items():
        missing = [key for key in keys if not parser.has_option(section, key)]
        if missing:
            raise ConfigError(f"[{section}] is missing required keys: {', '.join(missing)}")
    return parser


def load_experiment_config(path: str) -> ExperimentConfig:
    """Load and validate an experiment config file"""
    parser = read_config_file(path)
    experiment = parser["experiment"]
    raw_example = experiment["example"].strip().lower()
    example = raw_example if raw_example == "custom" else _parse_integer("experiment", "example",
                                                                         raw_example)
    preset = EXAMPLE_PRESETS.get(example, {})

    scheme = parser["scheme"]

    def get(section, key):
        return parser.get(section, key, fallback=None)

    def number_or_word(key, kind, words):
        raw = get("scheme", key)
        if raw is None:
            return None
        raw = raw.strip().lower()
        if raw in words:
            return raw
        return _parse_integer("scheme", key, raw) if kind is int else _convert("scheme", key, raw, kind)

    h = number_or_word("h", float, (AUTO, OPTIMAL))
    n_half = number_or_word("n", int, (AUTO,))
    if n_half is None:
        n_half = preset.get("n", AUTO if get("scheme", "epsilon") is not None else None)
    if h is None and n_half is not None:
        h = AUTO if n_half == AUTO else preset.get("h", OPTIMAL)

    def optional_float(section, key, default=None):
        raw = get(section, key)
        return default if raw is None else _convert(section, key, raw, float)

    sweep = SweepSettings()
    if parser.has_section("sweep"):
        section = parser["sweep"]
        list_keys = {"n_values": int, "m_values": int, "a_values": float, "epsilons": float,
                     "deltas": float, "tolerances": float, "profile_deltas": float}
        for key, kind in list_keys.items():
            if key in section:
                setattr(sweep, key, _parse_list("sweep", key, section[key], kind))
        for key in ("kind", "norm_model"):
            if key in section:
                setattr(sweep, key, section[key].strip().lower())
        if "t_points" in section:
            sweep.t_points = _parse_integer("sweep", "t_points", section["t_points"])
        if "max_degree" in section:
            sweep.max_degree = _parse_integer("sweep", "max_degree", section["max_degree"])
        sweep.t = optional_float("sweep", "t")
        sweep.graph_norm = optional_float("sweep", "graph_norm")
        sweep.error_floor = optional_float("sweep", "error_floor", sweep.error_floor)

    resolution = preset.get("resolution")
    raw_resolution = get("discretization", "resolution")
    if raw_resolution is not None:
        resolution = _parse_resolution(raw_resolution)

    checkpoint = get("output", "checkpoint")
    config = ExperimentConfig(
        example=example,
        m=_parse_integer("scheme", "m", scheme["m"]),
        delta=_convert("scheme", "delta", scheme["delta"], float),
        h=h,
        n_half=n_half,
        t_max=optional_float("scheme", "t_max", preset.get("t_max")),
        epsilon=optional_float("scheme", "epsilon", preset.get("epsilon")),
        pole_offset=optional_float("scheme", "pole_offset"),
        strategy=(get("scheme", "strategy") or "pre").strip().lower(),
        M=optional_float("scheme", "M", 1.0),
        symmetry=parser.getboolean("scheme", "symmetry", fallback=True),
        resolution=resolution,
        half_width=optional_float("discretization", "half_width", preset.get("half_width")),
        sweep=sweep,
        output_directory=get("output", "directory"),
        checkpoint=checkpoint.strip() if checkpoint else None,
        solution=parser.getboolean("output", "solution", fallback=False),
    )
    logger.info("loaded config %s (example %s, m=%d, delta=%g)", path, example, config.m,
                config.delta)
    return config


def preset_config(example: int, **overrides) -> ExperimentConfig:
    """Config built from an example preset, for programmatic runs"""
    if example not in EXAMPLE_PRESETS:
        raise ConfigError(f"no preset for example {example!r}")
    preset = EXAMPLE_PRESETS[example]
    base = dict(example=example, m=preset["m"], delta=preset["delta"],
                h=preset.get("h", OPTIMAL), n_half=preset["n"], t_max=preset["t_max"],
                epsilon=preset.get("epsilon"), resolution=preset["resolution"],
                half_width=preset["half_width"])
    base.update(overrides)
    return ExperimentConfig(**base)


def save_samples(samples: ResolventSampleSet, path: str) -> None:
    """Write the solved resolvent samples as CSV; mirrored samples are rebuilt on load"""
    plan = samples.plan
    rows = []
    for s in samples.samples:
        if s.mirrored:
            continue
        vector = np.asarray(s.vector, dtype=complex)
        rows.append(pd.DataFrame({
            "k": s.k,
            "z_re": s.z.real,
            "z_im": s.z.imag,
            "residual": s.residual_norm,
            "index": np.arange(vector.size),
            "u_re": vector.real,
            "u_im": vector.imag,
        }))
    frame = pd.concat(rows, ignore_index=True) if rows else pd.DataFrame(
        columns=["k", "z_re", "z_im", "residual", "index", "u_re", "u_im"])
    pole = "none" if plan.pole_offset is None else repr(plan.pole_offset)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="\n") as handle:
        handle.write(f"{CSV_HEADER_PREFIX} {VERSION}\n")
        handle.write(f"# plan delta={plan.delta!r} h={plan.h!r} n_half={plan.n_half} m={plan.m} "
                     f"t_max={plan.t_max!r} pole_offset={pole}\n")
        handle.write(f"# samples x_tag={samples.x_tag} regularized={int(samples.regularized)} "
                     f"real_input={int(samples.real_input)} rhs_norm={samples.rhs_norm!r}\n")
        frame.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n")
    logger.info("checkpointed %d samples to %s", samples.solve_count, path)


def _read_metadata(path: str) -> dict:
    metadata = {}
    with open(path) as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            for token in line[1:].split()[1:]:
                if "=" in token:
                    key, value = token.split("=", 1)
                    metadata[key] = value
    return metadata


def load_samples(path: str) -> ResolventSampleSet:
    """Read a sample set written by save_samples"""
    if not os.path.exists(path):
        raise ConfigError(f"checkpoint not found: {path}")
    metadata = _read_metadata(path)
    try:
        pole = metadata["pole_offset"]
        plan = ContourPlan(delta=float(metadata["delta"]), h=float(metadata["h"]),
                           n_half=int(metadata["n_half"]), m=int(metadata["m"]),
                           t_max=float(metadata["t_max"]),
                           pole_offset=None if pole == "none" else float(pole))
        regularized = bool(int(metadata["regularized"]))
        real_input = bool(int(metadata["real_input"]))
        rhs_norm = float(metadata["rhs_norm"])
        x_tag = metadata["x_tag"]
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"checkpoint {path} has a malformed header: {exc}") from exc

    frame = pd.read_csv(path, comment="#")
    by_index = {}
    for k, group in frame.groupby("k", sort=True):
        group = group.sort_values("index")
        first = group.iloc[0]
        vector = group["u_re"].to_numpy() + 1j * group["u_im"].to_numpy()
        by_index[int(k)] = NodeSample(int(k), complex(first["z_re"], first["z_im"]), vector,
                                      float(first["residual"]))
    for k in range(1, plan.n_half + 1):
        if -k not in by_index and k in by_index:
            s = by_index[k]
            by_index[-k] = NodeSample(-k, s.z.conjugate(), s.vector, s.residual_norm,
                                      mirrored=True)
    missing = [k for k in range(-plan.n_half, plan.n_half + 1) if k not in by_index]
    if missing:
        raise ConfigError(f"checkpoint {path} is missing samples for k = {missing[:5]}")
    samples = tuple(by_index[k] for k in range(-plan.n_half, plan.n_half + 1))
    logger.info("loaded %d samples from %s", len(by_index), path)
    return ResolventSampleSet(plan=plan, samples=samples, x_tag=x_tag, regularized=regularized,
                              real_input=real_input, rhs_norm=rhs_norm)


def grid_frame(coordinates: dict, values: dict) -> pd.DataFrame:
    """Grid coordinates and field values as one frame, one row per node"""
    frame = pd.DataFrame({name: np.asarray(c) for name, c in coordinates.items()})
    for name, v in values.items():
        frame[name] = np.asarray(v)
    return frame
