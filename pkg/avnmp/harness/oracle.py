"""Ground truth and the sequential oracle.

Both advance every node one real tick at a time, in topological order,
through the same transition rule the logical processes use. A node's
arrival load at tick t is its external trace load plus whatever each
upstream node served at t - latency.
"""

from typing import Dict, List, Mapping, Tuple

from ..core.messages import RealTrafficEvent
from ..core.node import NodeState, transition
from ..drivers.traces import TruthTrace
from .topology import Topology


class GroundTruth:
    def __init__(
        self,
        topology: Topology,
        capacities: Mapping[str, int],
        traces: Mapping[str, TruthTrace],
    ):
        self.topology = topology
        self.capacities = dict(capacities)
        self.traces = dict(sorted(traces.items()))
        self.order = topology.topological_order()
        self.upstream = {
            node: [(src, topology.graph.edges[src, node]["latency"]) for src in srcs]
            for node, srcs in topology.upstream.items()
        }
        self.max_latency = topology.max_latency

        self.tick = 0
        self.states: Dict[str, NodeState] = {node: NodeState() for node in topology.nodes}
        self.served: Dict[Tuple[str, int], int] = {}
        # external arrivals applied by the latest `advance`
        self.traffic: List[RealTrafficEvent] = []

    def __repr__(self):
        return f"GroundTruth(tick={self.tick}, nodes={len(self.states)})"

    def real_traffic(self, tick) -> List[RealTrafficEvent]:
        return [trace.event(node, tick) for node, trace in self.traces.items()]

    def advance(self) -> Dict[str, NodeState]:
        """Apply one tick of real traffic and return the new states"""

        t = self.tick + 1
        self.traffic = self.real_traffic(t)
        external = {event.dst: event.load for event in self.traffic}
        for node in self.order:
            load = external.get(node, 0)
            for src, latency in self.upstream[node]:
                load += self.served.get((src, t - latency), 0)
            state, served = transition(self.states[node], load, 1, self.capacities[node])
            self.states[node] = state
            self.served[(node, t)] = served

        # forwarded amounts older than the longest link are never read again;
        # the current tick stays readable for verification
        stale = t - self.max_latency - 1
        for node in self.order:
            self.served.pop((node, stale), None)

        self.tick = t
        return dict(self.states)


def oracle_trajectory(
    topology: Topology,
    capacities: Mapping[str, int],
    traces: Mapping[str, TruthTrace],
    duration: int,
) -> Dict[Tuple[str, int], NodeState]:
    truth = GroundTruth(topology, capacities, traces)
    trajectory = {(node, 0): state for node, state in truth.states.items()}
    for _ in range(duration):
        states = truth.advance()
        for node, state in states.items():
            trajectory[(node, truth.tick)] = state
    return trajectory


def sequential_oracle(cfg) -> Dict[Tuple[str, int], NodeState]:
    """Brute-force state trajectory of a scenario, ticks 0..duration.

    Parameters
    ----------
    cfg : DictConfig
        validated scenario (see `avnmp.load_scenario`)

    Returns
    -------
    trajectory : dict
        (node, tick) -> NodeState
    """

    from .. import builder

    topology = builder.build_topology(cfg)
    traces = builder.build_truth(cfg, topology)
    capacities = builder.build_capacities(cfg, topology)
    return oracle_trajectory(topology, capacities, traces, cfg.duration)
