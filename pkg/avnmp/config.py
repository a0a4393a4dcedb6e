"""Scenario schema and loading.

Scenario files are YAML or JSON; both are read with OmegaConf and merged
onto the structured schema below, which rejects unknown keys.
"""

import os

import yaml

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from . import constants
from .drivers import PREDICTORS
from .errors import ConfigError
from .harness.topology import Topology


@dataclass
class LinkConfig:
    src: str = "???"
    dst: str = "???"
    latency: int = 1


@dataclass
class TopologyConfig:
    nodes: List[str] = field(default_factory=lambda: ["n0"])
    links: List[LinkConfig] = field(default_factory=list)
    entry_node: str = "n0"


@dataclass
class PredictorConfig:
    kind: str = "perfect"
    rate: int = 0
    window: int = 2
    amplitude: int = 0
    noise_seed: Optional[int] = None
    alpha: float = constants.DEFAULT_ALPHA
    delta: int = constants.DEFAULT_DELTA


@dataclass
class TruthConfig:
    # loads[i] is the load at tick i + 1
    loads: List[int] = field(default_factory=list)
    file: Optional[str] = None
    max_load: int = 0
    seed: Optional[int] = None


@dataclass
class ScenarioConfig:
    experiment_name: str = "avnmp"
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    predictor: PredictorConfig = field(default_factory=PredictorConfig)
    theta: int = 0
    duration: int = 100
    seed: int = constants.DEFAULT_SEED
    gvt_every: int = constants.DEFAULT_GVT_EVERY
    capacity: int = constants.DEFAULT_CAPACITY
    capacities: Dict[str, int] = field(default_factory=dict)
    truth: TruthConfig = field(default_factory=TruthConfig)
    side_truth: Dict[str, TruthConfig] = field(default_factory=dict)
    progress: bool = False


def load_config(source, seed: Optional[int] = None) -> DictConfig:
    """Load and validate a scenario.

    Parameters
    ----------
    source : str, os.PathLike, dict or DictConfig
        path to a YAML/JSON scenario file, or the scenario itself
    seed : int, optional
        overrides both the file and the AVNMP_SEED environment variable

    Returns
    -------
    cfg : DictConfig
        scenario merged onto the schema, read-only
    """

    schema = OmegaConf.structured(ScenarioConfig)
    try:
        if isinstance(source, (str, os.PathLike)):
            loaded = OmegaConf.load(source)
        else:
            loaded = OmegaConf.create(source)
        cfg = OmegaConf.merge(schema, loaded)
    except OmegaConfBaseException as e:
        key = getattr(e, "full_key", None) or "<config>"
        raise ConfigError(key, str(e).splitlines()[0]) from e
    except yaml.YAMLError as e:
        raise ConfigError("<config>", f"not valid YAML/JSON: {e}") from e

    env_seed = os.environ.get(constants.SEED_ENV_VAR)
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            raise ConfigError(
                "seed", f"{constants.SEED_ENV_VAR}={env_seed!r} is not an integer"
            ) from None
    if seed is not None:
        cfg.seed = seed
    if isinstance(source, (str, os.PathLike)):
        _resolve_trace_files(cfg, os.path.dirname(os.path.abspath(source)))

    try:
        validate_config(cfg)
    except OmegaConfBaseException as e:
        key = getattr(e, "full_key", None) or "<config>"
        raise ConfigError(key, str(e).splitlines()[0]) from e
    OmegaConf.set_readonly(cfg, True)
    return cfg


def _resolve_trace_files(cfg, base_dir):
    # trace files are relative to the scenario file, not the working directory
    for truth in [cfg.truth] + list(cfg.side_truth.values()):
        if truth.file is not None and not os.path.isabs(truth.file):
            truth.file = os.path.join(base_dir, truth.file)


def validate_config(cfg):
    if cfg.duration < 1:
        raise ConfigError("duration", f"must be >= 1, got {cfg.duration}")
    if cfg.theta < 0:
        raise ConfigError("theta", f"must be >= 0, got {cfg.theta}")
    if cfg.gvt_every < 1:
        raise ConfigError("gvt_every", f"must be >= 1, got {cfg.gvt_every}")
    if cfg.capacity < 1:
        raise ConfigError("capacity", f"must be >= 1, got {cfg.capacity}")
    for node, capacity in cfg.capacities.items():
        if node not in cfg.topology.nodes:
            raise ConfigError(f"capacities.{node}", "is not a topology node")
        if capacity < 1:
            raise ConfigError(f"capacities.{node}", f"must be >= 1, got {capacity}")

    p = cfg.predictor
    if p.kind not in PREDICTORS:
        raise ConfigError(
            "predictor.kind", f"{p.kind!r} not one of {sorted(PREDICTORS)}"
        )
    if p.delta < 1:
        raise ConfigError("predictor.delta", f"must be >= 1, got {p.delta}")
    if p.window < 2:
        raise ConfigError("predictor.window", f"must be >= 2, got {p.window}")
    if p.amplitude < 0:
        raise ConfigError("predictor.amplitude", f"must be >= 0, got {p.amplitude}")
    if p.rate < 0:
        raise ConfigError("predictor.rate", f"must be >= 0, got {p.rate}")
    if not 0 <= p.alpha <= 1:
        raise ConfigError("predictor.alpha", f"must lie in [0, 1], got {p.alpha}")

    topology = Topology.from_config(cfg.topology)
    for node in cfg.side_truth:
        if node not in topology.driven_nodes:
            raise ConfigError(f"side_truth.{node}", "is not a source node")
        if node == topology.entry_node:
            raise ConfigError(f"side_truth.{node}", "entry node traffic belongs in `truth`")
    for name, truth in [("truth", cfg.truth)] + [
        (f"side_truth.{k}", v) for k, v in cfg.side_truth.items()
    ]:
        if any(load < 0 for load in truth.loads):
            raise ConfigError(f"{name}.loads", "loads must be >= 0")
        if truth.max_load < 0:
            raise ConfigError(f"{name}.max_load", f"must be >= 0, got {truth.max_load}")
