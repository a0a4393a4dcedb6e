import itertools
import logging

from . import drivers
from . import harness
from .core.logical_process import LogicalProcess
from .drivers.traces import TruthTrace, build_trace

logger = logging.getLogger(__name__)


def build_topology(cfg):
    return harness.topology.Topology.from_config(cfg.topology)


def build_capacities(cfg, topology):
    return {node: cfg.capacities.get(node, cfg.capacity) for node in topology.nodes}


def build_truth(cfg, topology):
    """Truth trace per driven node; synthetic traces cover the full window"""

    length = cfg.duration + cfg.predictor.delta
    traces = {}
    for index, node in enumerate(topology.driven_nodes):
        if node == topology.entry_node:
            truth_cfg, field = cfg.truth, "truth"
        elif node in cfg.side_truth:
            truth_cfg, field = cfg.side_truth[node], f"side_truth.{node}"
        else:
            traces[node] = TruthTrace.zeros()
            continue

        trace = build_trace(truth_cfg, field, length, cfg.seed, index)
        explicit = truth_cfg.file is not None or len(truth_cfg.loads) > 0
        if explicit and trace.last_tick < cfg.duration:
            logger.warning(
                "%s: trace ends at tick %d before duration %d, later ticks carry no load",
                field,
                trace.last_tick,
                cfg.duration,
            )
        traces[node] = trace
    return traces


def build_predictor_spec(cfg):
    p = cfg.predictor
    return drivers.PredictorSpec(
        kind=p.kind,
        rate=p.rate,
        window=p.window,
        amplitude=p.amplitude,
        seed=cfg.seed if p.noise_seed is None else p.noise_seed,
        alpha=p.alpha,
        delta=p.delta,
    )


def build_driving_process(cfg, node, index, truth, id_source=None):
    predictor = drivers.PREDICTORS[cfg.predictor.kind]
    return predictor(build_predictor_spec(cfg), node, truth, index, id_source)


def build_engine(cfg):
    topology = build_topology(cfg)
    capacities = build_capacities(cfg, topology)
    traces = build_truth(cfg, topology)

    # one id sequence for the whole run keeps (receive_time, id, sign) unique
    next_id = itertools.count(1).__next__
    downstream = topology.downstream
    time_limit = cfg.duration + cfg.predictor.delta + topology.max_latency
    lps = {
        node: LogicalProcess(
            node,
            capacities[node],
            theta=cfg.theta,
            downstream=downstream.get(node),
            id_source=next_id,
            time_limit=time_limit,
        )
        for node in topology.nodes
    }
    driving = {
        node: build_driving_process(cfg, node, index, traces[node], next_id)
        for index, node in enumerate(topology.driven_nodes)
    }
    ground_truth = harness.oracle.GroundTruth(topology, capacities, traces)
    return harness.engine.SimEngine(cfg, topology, lps, driving, ground_truth)
