import logging
import random

from fractions import Fraction

import numpy as np
import pytest

from avnmp.core.messages import ConstantLoad, LinearLoad
from avnmp.drivers import PREDICTORS, PredictorSpec, TruthTrace
from avnmp.drivers.predictors import (
    ConstantRatePredictor,
    LinearExtrapolationPredictor,
    NoisyTracePredictor,
    PerfectPredictor,
    fit_line,
)


def loads_of(messages):
    return [(m.receive_time, m.evaluated_load()) for m in messages]


def test_registry():
    assert sorted(PREDICTORS) == [
        "constant_rate",
        "linear_extrapolation",
        "noisy_trace",
        "perfect",
    ]


@pytest.mark.parametrize(
    "kwargs",
    [{"delta": 0}, {"window": 1}, {"amplitude": -1}, {"alpha": 1.5}, {"alpha": -0.1}],
)
def test_predictor_spec_validation(kwargs):
    with pytest.raises(ValueError):
        PredictorSpec(**kwargs)


def test_predictor_spec_alpha_is_exact():
    assert PredictorSpec(alpha=0.5).alpha == Fraction(1, 2)


def test_linear_extrapolation_slope_two():
    spec = PredictorSpec(kind="linear_extrapolation", window=2, delta=2)
    driver = LinearExtrapolationPredictor(spec, "n0")
    messages = driver.predict([(8, 4), (9, 6)], real_now=9)
    assert loads_of(messages) == [(10, 8), (11, 10)]
    assert all(m.send_time == 9 for m in messages)
    assert messages[0].payload == LinearLoad(base=6, slope=2, anchor=9)


def test_constant_rate():
    driver = ConstantRatePredictor(PredictorSpec(kind="constant_rate", rate=5, delta=3), "n0")
    messages = driver.predict([], real_now=0)
    assert loads_of(messages) == [(1, 5), (2, 5), (3, 5)]
    assert all(m.dst == "n0" and m.sign == 1 for m in messages)


def test_perfect_reads_trace():
    truth = TruthTrace({1: 4, 2: 0, 3: 9})
    driver = PerfectPredictor(PredictorSpec(delta=3), "n0", truth)
    assert loads_of(driver.predict([], real_now=0)) == [(1, 4), (2, 0), (3, 9)]


def test_linear_extrapolation_short_history_falls_back(caplog):
    spec = PredictorSpec(kind="linear_extrapolation", window=3, delta=2)
    driver = LinearExtrapolationPredictor(spec, "n0")
    with caplog.at_level(logging.WARNING):
        messages = driver.predict([(1, 7)], real_now=1)
    assert "window 3" in caplog.text
    assert [m.payload for m in messages] == [ConstantLoad(7), ConstantLoad(7)]

    driver = LinearExtrapolationPredictor(spec, "n0")
    assert loads_of(driver.predict([], real_now=0)) == [(1, 0), (2, 0)]


def test_linear_extrapolation_clamps_negative():
    spec = PredictorSpec(kind="linear_extrapolation", window=2, delta=4)
    driver = LinearExtrapolationPredictor(spec, "n0")
    messages = driver.predict([(1, 6), (2, 3)], real_now=2)
    assert loads_of(messages) == [(3, 0), (4, 0), (5, 0), (6, 0)]


def test_fit_line_exact():
    value, slope = fit_line([(1, 1), (2, 2), (3, 4)], at=3)
    assert slope == Fraction(3, 2)
    assert value == Fraction(7, 3) + Fraction(3, 2)
    assert fit_line([(4, 2), (4, 6)], at=5) == (4, 0)


def test_noisy_trace_matches_seeded_stream():
    truth = TruthTrace.from_loads([10] * 30)
    spec = PredictorSpec(kind="noisy_trace", amplitude=3, seed=11, delta=5)
    driver = NoisyTracePredictor(spec, "n0", truth, index=2)
    messages = driver.predict([], 0) + driver.predict([], 1) + driver.predict([], 4)

    rng = np.random.default_rng([11, 0, 2])
    expected = [10 + int(rng.integers(-3, 3, endpoint=True)) for _ in messages]
    assert [m.payload.value for m in messages] == expected
    assert [m.receive_time for m in messages] == list(range(1, 10))


def test_noisy_trace_is_deterministic():
    truth = TruthTrace.synthetic(max_load=8, length=60, seed=3)
    spec = PredictorSpec(kind="noisy_trace", amplitude=4, seed=5, delta=6)

    def run():
        driver = NoisyTracePredictor(spec, "n0", truth)
        return [
            (m.id, m.receive_time, m.payload)
            for now in range(0, 40, 3)
            for m in driver.predict([], now)
        ]

    assert run() == run()


@pytest.mark.parametrize("kind", sorted(PREDICTORS))
def test_window_discipline_and_no_duplicates(kind):
    rng = random.Random(kind)
    for _ in range(200):
        spec = PredictorSpec(
            kind=kind,
            rate=rng.randint(0, 9),
            window=rng.randint(2, 5),
            amplitude=rng.randint(0, 5),
            seed=rng.randint(0, 100),
            delta=rng.randint(1, 12),
        )
        truth = TruthTrace.synthetic(max_load=9, length=200, seed=rng.randint(0, 100))
        driver = PREDICTORS[kind](spec, "n0", truth)
        history, seen, now = [], set(), 0
        for _ in range(rng.randint(1, 10)):
            for m in driver.predict(history, now):
                assert now < m.receive_time <= now + spec.delta
                assert m.receive_time not in seen
                seen.add(m.receive_time)
            now += rng.randint(1, 4)
            history = [(t, truth.load_at(t)) for t in range(1, now + 1)]


def test_perfect_predictions_equal_truth():
    truth = TruthTrace.synthetic(max_load=20, length=100, seed=1)
    driver = PerfectPredictor(PredictorSpec(delta=7), "n0", truth)
    for now in range(0, 90):
        for m in driver.predict([], now):
            assert m.evaluated_load() == truth.load_at(m.receive_time)


def test_driver_lvt_follows_real_time():
    driver = ConstantRatePredictor(PredictorSpec(kind="constant_rate", delta=2), "n0")
    driver.predict([], 0)
    driver.predict([], 5)
    assert driver.lvt == 5
    assert driver.last_predicted == 7
