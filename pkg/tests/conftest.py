import copy
import itertools

import pytest

import avnmp

from avnmp.constants import SEED_ENV_VAR


BASE_SCENARIO = {
    "experiment_name": "test",
    "duration": 30,
    "theta": 0,
    "seed": 7,
    "capacity": 5,
    "topology": {"nodes": ["n0"], "links": [], "entry_node": "n0"},
    "predictor": {"kind": "perfect", "delta": 5},
    "truth": {"max_load": 8},
}


def merge(base, overrides):
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = value
    return out


def _chain(nodes, latencies):
    return {
        "nodes": list(nodes),
        "links": [
            {"src": src, "dst": dst, "latency": latency}
            for (src, dst), latency in zip(zip(nodes, nodes[1:]), latencies)
        ],
        "entry_node": nodes[0],
    }


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running engine runs")


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)


@pytest.fixture
def scenario_dict():
    def make(**overrides):
        return merge(BASE_SCENARIO, overrides)

    return make


@pytest.fixture
def scenario(scenario_dict):
    def make(**overrides):
        return avnmp.load_scenario(scenario_dict(**overrides))

    return make


@pytest.fixture
def chain():
    """Topology config for a linear chain nodes[0] -> nodes[1] -> ..."""
    return _chain


@pytest.fixture
def ids():
    return itertools.count(1).__next__
