import logging

from typing import List, Optional, Union

from . import builder
from . import config
from .core.node import NodeState
from .drivers import PREDICTORS
from .harness.engine import NotAvailable, SimEngine
from .harness.oracle import sequential_oracle
from .metrics.report import MetricsReport

logger = logging.getLogger(__name__)


def available_predictors() -> List[str]:
    """Returns the names of the registered predictor kinds"""
    return sorted(PREDICTORS.keys())


def load_scenario(source, seed: Optional[int] = None):
    """Load a scenario

    Parameters
    ----------
    source : str, os.PathLike or dict
        YAML/JSON scenario file, or the scenario as a mapping
    seed : int, optional
        overrides the environment variable AVNMP_SEED and the file

    Returns
    -------
    cfg : omegaconf.DictConfig
        validated, read-only scenario

    Raises
    ------
    avnmp.errors.ConfigError
        naming the offending field
    """
    return config.load_config(source, seed=seed)


def _as_config(scenario):
    if isinstance(scenario, SimEngine):
        return scenario.cfg
    if hasattr(scenario, "predictor") and hasattr(scenario, "topology"):
        return scenario
    return load_scenario(scenario)


def run_scenario(scenario, return_engine: bool = False):
    """Run a scenario until real time reaches its duration

    Parameters
    ----------
    scenario : DictConfig, str or dict
        loaded scenario, or anything `load_scenario` accepts
    return_engine : bool
        also return the finished SimEngine, for queries and inspection

    Returns
    -------
    report : MetricsReport
        or (report, engine) when `return_engine` is set
    """

    cfg = _as_config(scenario)
    logger.info(
        "running %s: %d nodes, predictor %s, duration %d",
        cfg.experiment_name,
        len(cfg.topology.nodes),
        cfg.predictor.kind,
        cfg.duration,
    )
    engine = builder.build_engine(cfg).run()
    report = MetricsReport.from_engine(engine)
    if return_engine:
        return report, engine
    return report


def query_predicted(engine: SimEngine, node: str, t: int) -> Union[NodeState, NotAvailable]:
    """Predicted state of `node` at virtual time `t`

    Returns the cached state when `t` is within the node's lookahead and
    not yet fossil collected, otherwise NotAvailable with the reason.

    Raises
    ------
    avnmp.errors.UnknownNodeError
    """
    return engine.query_predicted(node, t)


def run_oracle(scenario):
    """Sequential (no optimism, no rollback) trajectory, (node, tick) -> NodeState"""
    return sequential_oracle(_as_config(scenario))
