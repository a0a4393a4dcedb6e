import pytest

from avnmp.errors import ConfigError
from avnmp.harness.topology import Link, Topology


def topo(nodes, links, entry=None):
    return Topology(
        nodes=nodes,
        links=[Link(*l) for l in links],
        entry_node=entry if entry is not None else nodes[0],
    )


def test_chain_maps():
    t = topo(["a", "b", "c"], [("a", "b", 2), ("b", "c", 1)])
    assert t.downstream == {"a": ("b", 2), "b": ("c", 1)}
    assert t.upstream == {"a": [], "b": ["a"], "c": ["b"]}
    assert t.sources == ["a"]
    assert t.driven_nodes == ["a"]
    assert t.topological_order() == ["a", "b", "c"]
    assert t.downstream_of("c") is None


def test_fan_in_drives_every_source():
    t = topo(["hub", "y", "x"], [("x", "hub", 1), ("y", "hub", 3)], entry="x")
    assert t.sources == ["x", "y"]
    assert t.driven_nodes == ["x", "y"]
    assert t.upstream["hub"] == ["x", "y"]
    assert t.topological_order() == ["x", "y", "hub"]


def test_entry_node_with_upstream_is_driven():
    t = topo(["a", "b"], [("a", "b", 1)], entry="b")
    assert t.driven_nodes == ["a", "b"]


@pytest.mark.parametrize(
    "nodes, links, entry, field",
    [
        ([], [], "a", "topology.nodes"),
        (["a", "a"], [], "a", "topology.nodes"),
        (["a"], [], "z", "topology.entry_node"),
        (["a", "b"], [("a", "z", 1)], "a", "topology.links.0"),
        (["a", "b"], [("a", "a", 1)], "a", "topology.links.0"),
        (["a", "b"], [("a", "b", 0)], "a", "topology.links.0.latency"),
        (["a", "b", "c"], [("a", "b", 1), ("a", "c", 1)], "a", "topology.links.1"),
        (["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)], "a", "topology.links"),
    ],
)
def test_validation(nodes, links, entry, field):
    with pytest.raises(ConfigError) as info:
        topo(nodes, links, entry)
    assert info.value.field == field
    assert str(info.value).startswith(field)


def test_graph_carries_link_latency():
    t = topo(["a", "b", "hub"], [("a", "hub", 2), ("b", "hub", 5)])
    assert t.graph.edges["b", "hub"]["latency"] == 5
    assert t.graph.in_degree("hub") == 2
    assert t.max_latency == 5
    assert topo(["a"], []).max_latency == 0


def test_cycle_is_named():
    with pytest.raises(ConfigError) as info:
        topo(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
    assert info.value.field == "topology.links"
    assert "cycle" in str(info.value)
