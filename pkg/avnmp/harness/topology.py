from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..errors import ConfigError


@dataclass(frozen=True)
class Link:
    src: str
    dst: str
    latency: int = 1


@dataclass(frozen=True)
class Topology:
    """Feed-forward network: each node has at most one outgoing link"""

    nodes: Tuple[str, ...]
    links: Tuple[Link, ...]
    entry_node: str
    graph: nx.DiGraph = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "graph", self._build_graph())

    @classmethod
    def from_config(cls, cfg):
        links = [Link(l.src, l.dst, l.latency) for l in cfg.links]
        return cls(nodes=list(cfg.nodes), links=links, entry_node=cfg.entry_node)

    def _build_graph(self) -> nx.DiGraph:
        if not self.nodes:
            raise ConfigError("topology.nodes", "at least one node is required")
        if len(set(self.nodes)) != len(self.nodes):
            duplicate = next(n for n in self.nodes if self.nodes.count(n) > 1)
            raise ConfigError("topology.nodes", f"duplicate node {duplicate!r}")
        if self.entry_node not in self.nodes:
            raise ConfigError(
                "topology.entry_node", f"{self.entry_node!r} is not in topology.nodes"
            )

        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        for i, link in enumerate(self.links):
            name = f"topology.links.{i}"
            for end in (link.src, link.dst):
                if end not in graph:
                    raise ConfigError(name, f"unknown node {end!r}")
            if link.src == link.dst:
                raise ConfigError(name, f"self link on {link.src!r}")
            if link.latency < 1:
                raise ConfigError(f"{name}.latency", f"must be >= 1, got {link.latency}")
            if graph.out_degree(link.src) > 0:
                raise ConfigError(name, f"{link.src!r} already has an outgoing link")
            graph.add_edge(link.src, link.dst, latency=link.latency)

        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise ConfigError("topology.links", f"cycle through {cycle[0][0]!r}")
        return graph

    @property
    def downstream(self) -> Dict[str, Tuple[str, int]]:
        return {src: (dst, data["latency"]) for src, dst, data in self.graph.edges(data=True)}

    @property
    def upstream(self) -> Dict[str, List[str]]:
        return {node: sorted(self.graph.predecessors(node)) for node in self.nodes}

    @property
    def max_latency(self) -> int:
        return max((l.latency for l in self.links), default=0)

    def downstream_of(self, node) -> Optional[Tuple[str, int]]:
        return self.downstream.get(node)

    @property
    def sources(self) -> List[str]:
        return sorted(node for node, degree in self.graph.in_degree() if degree == 0)

    @property
    def driven_nodes(self) -> List[str]:
        """Nodes fed by a driving process: the entry node plus every source"""
        return sorted(set(self.sources) | {self.entry_node})

    def topological_order(self) -> List[str]:
        # string order breaks ties between independent nodes
        return list(nx.lexicographical_topological_sort(self.graph))
