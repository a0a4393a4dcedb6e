"""Ground-truth traffic traces.

A trace maps real ticks to the external load (packets/tick) arriving at one
driven node. Ticks that are not listed carry no load.
"""

import os

import numpy as np
import pandas as pd

from ..constants import TRUTH_STREAM
from ..core.messages import RealTrafficEvent
from ..errors import ConfigError


class TruthTrace:
    def __init__(self, loads=None):
        """
        Parameters
        ----------
        loads : dict
            tick -> load, ticks >= 1, loads >= 0
        """
        self.loads = {}
        for tick, load in sorted((loads or {}).items()):
            tick, load = int(tick), int(load)
            if tick < 0:
                raise ValueError(f"trace tick must be >= 0, got {tick}")
            if load < 0:
                raise ValueError(f"trace load at tick {tick} must be >= 0, got {load}")
            self.loads[tick] = load
        self.last_tick = max(self.loads, default=0)

    def __repr__(self):
        return f"TruthTrace(ticks={len(self.loads)}, last_tick={self.last_tick})"

    def __eq__(self, other):
        return isinstance(other, TruthTrace) and self.loads == other.loads

    def load_at(self, tick: int) -> int:
        return self.loads.get(tick, 0)

    def event(self, node: str, tick: int) -> RealTrafficEvent:
        return RealTrafficEvent(dst=node, at=tick, load=self.load_at(tick))

    @classmethod
    def zeros(cls):
        return cls()

    @classmethod
    def from_loads(cls, loads):
        """Dense list: element i is the load at tick i + 1"""
        return cls({i + 1: load for i, load in enumerate(loads)})

    @classmethod
    def from_file(cls, path):
        """Read `tick,load` lines; blank lines and `#` comments are skipped"""

        if not os.path.isfile(path):
            raise FileNotFoundError(f"truth trace {path} does not exist")
        df = pd.read_csv(
            path,
            header=None,
            names=["tick", "load"],
            comment="#",
            skip_blank_lines=True,
            dtype={"tick": "int64", "load": "int64"},
        )
        if not df["tick"].is_monotonic_increasing or df["tick"].duplicated().any():
            raise ValueError(f"ticks in {path} must be strictly ascending")
        return cls(dict(zip(df["tick"].tolist(), df["load"].tolist())))

    @classmethod
    def synthetic(cls, max_load: int, length: int, seed: int, index: int = 0):
        """Uniform loads on [0, max_load] for ticks 1..length"""

        rng = np.random.default_rng([seed, TRUTH_STREAM, index])
        loads = rng.integers(0, max_load, size=length, endpoint=True)
        return cls.from_loads(loads.tolist())


def build_trace(truth_cfg, field, length, seed, index=0):
    """Build a TruthTrace from a `TruthConfig` node; `field` names it in errors"""

    try:
        if truth_cfg.file is not None:
            if len(truth_cfg.loads):
                raise ConfigError(field, "give either `loads` or `file`, not both")
            return TruthTrace.from_file(truth_cfg.file)
        if len(truth_cfg.loads):
            return TruthTrace.from_loads(list(truth_cfg.loads))
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(field, str(e)) from e

    if truth_cfg.max_load < 0:
        raise ConfigError(f"{field}.max_load", "must be >= 0")
    if truth_cfg.max_load > 0:
        trace_seed = seed if truth_cfg.seed is None else truth_cfg.seed
        return TruthTrace.synthetic(truth_cfg.max_load, length, trace_seed, index)
    return TruthTrace.zeros()
