from dataclasses import dataclass, field
from typing import Dict, List

import pandas as pd

from omegaconf import OmegaConf

from ..constants import CSV_COLUMNS, ERROR_COLUMN_PREFIX


@dataclass
class MetricsReport:
    """Per-tick series and run totals of one AVNMP run"""

    experiment_name: str
    seed: int
    nodes: List[str]
    config: dict = field(default_factory=dict)
    totals: Dict[str, int] = field(default_factory=dict)
    series: List[dict] = field(default_factory=list)

    @property
    def columns(self) -> List[str]:
        return CSV_COLUMNS + [f"{ERROR_COLUMN_PREFIX}{node}" for node in self.nodes]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.series, columns=self.columns).astype("int64")

    def as_dict(self) -> dict:
        return {
            "experiment_name": self.experiment_name,
            "seed": self.seed,
            "nodes": list(self.nodes),
            "config": self.config,
            "totals": dict(self.totals),
            "series": [{c: int(row[c]) for c in self.columns} for row in self.series],
        }

    @classmethod
    def from_engine(cls, engine):
        c = engine.counters
        totals = {
            "tolerance_rollbacks": c.tolerance_rollbacks,
            "straggler_rollbacks": c.straggler_rollbacks,
            "messages": c.emitted,
            "anti_messages": c.anti_emitted,
            "annihilated": c.annihilated,
            "adjusted": c.adjusted,
            "fossil_states": c.fossil_states,
            "fossil_outputs": c.fossil_outputs,
            "fossil_cache": c.fossil_cache,
            "fossil_consumed": c.fossil_consumed,
            "gvt_snapshots": len(engine.gvt_history),
        }
        return cls(
            experiment_name=engine.cfg.experiment_name,
            seed=engine.cfg.seed,
            nodes=sorted(engine.lps),
            config=OmegaConf.to_container(engine.cfg, resolve=True),
            totals=totals,
            series=[dict(row) for row in engine.rows],
        )
