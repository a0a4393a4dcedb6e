import json

import numpy as np
import pandas as pd
import pytest

import avnmp

from avnmp.metrics import MetricsReport, emit_report, summarize, summarize_csv
from avnmp.metrics.emit import emit_trajectory


def make_report(lookaheads, errors, rollbacks=None):
    rollbacks = rollbacks or [0] * len(lookaheads)
    series = [
        {
            "tick": t,
            "real_now": t,
            "min_lvt": t + la,
            "gvt": max(t - 1, 0),
            "lookahead": la,
            "rollbacks_cum": rb,
            "err_n0": err,
        }
        for t, (la, err, rb) in enumerate(zip(lookaheads, errors, rollbacks), start=1)
    ]
    totals = {
        "tolerance_rollbacks": rollbacks[-1] if rollbacks else 0,
        "straggler_rollbacks": 0,
        "messages": 12,
        "anti_messages": 0,
    }
    return MetricsReport("unit", 1, ["n0"], totals=totals, series=series)


def test_summary_of_known_series():
    stats = summarize(make_report([2, 4, 6], [0, 3, 1], [0, 1, 1]))
    assert stats.ticks == 3
    assert stats.mean_lookahead == 4.0
    assert stats.max_lookahead == 6
    assert stats.rollbacks == 1
    assert stats.mean_abs_error == pytest.approx(4 / 3)
    assert stats.max_abs_error == 3
    assert stats.overhead_ratio == 0.0


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        summarize(make_report([], []))


def test_mean_abs_error_tracks_noise(scenario):
    duration, delta, amplitude = 80, 3, 10
    cfg = scenario(
        duration=duration,
        capacity=1,
        truth={"loads": [20] * (duration + delta), "max_load": 0},
        predictor={"kind": "noisy_trace", "amplitude": amplitude, "delta": delta, "alpha": 0.0},
    )
    report = avnmp.run_scenario(cfg)
    stats = summarize(report)

    # one draw per tick, in tick order, from the entry node's noise stream
    noise = np.random.default_rng([cfg.seed, 0, 0]).integers(
        -amplitude, amplitude, size=duration + delta, endpoint=True
    )
    assert stats.mean_abs_error == pytest.approx(np.abs(noise[:duration]).mean())
    assert stats.max_abs_error == np.abs(noise[:duration]).max()


def test_zero_rollback_run_has_no_overhead(scenario):
    stats = summarize(avnmp.run_scenario(scenario()))
    assert stats.rollbacks == 0
    assert stats.tolerance_rollbacks == 0
    assert stats.overhead_ratio == 0.0
    assert stats.max_abs_error == 0


def test_csv_layout(tmp_path, scenario, chain):
    cfg = scenario(duration=3, topology=chain(["a", "b"], [1]))
    path = tmp_path / "r.csv"
    emit_report(avnmp.run_scenario(cfg), "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "tick,real_now,min_lvt,gvt,lookahead,rollbacks_cum,err_a,err_b"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_emission_is_byte_identical(tmp_path, scenario, fmt):
    cfg = scenario(predictor={"kind": "noisy_trace", "amplitude": 4})
    first, second = tmp_path / f"1.{fmt}", tmp_path / f"2.{fmt}"
    emit_report(avnmp.run_scenario(cfg), fmt, first)
    emit_report(avnmp.run_scenario(cfg), fmt, second)
    assert first.read_bytes() == second.read_bytes()


def test_json_matches_csv(tmp_path, scenario):
    cfg = scenario(theta=1, predictor={"kind": "noisy_trace", "amplitude": 5})
    report = avnmp.run_scenario(cfg)
    emit_report(report, "csv", tmp_path / "r.csv")
    emit_report(report, "json", tmp_path / "r.json")

    data = json.loads((tmp_path / "r.json").read_text())
    assert data["experiment_name"] == "test"
    assert data["seed"] == 7
    assert data["config"]["predictor"]["kind"] == "noisy_trace"
    frame = pd.read_csv(tmp_path / "r.csv")
    assert frame.to_dict("records") == data["series"]

    assert summarize_csv(tmp_path / "r.csv", data["totals"]) == summarize(report)


def test_summarize_csv_without_totals(tmp_path, scenario):
    report = avnmp.run_scenario(scenario())
    emit_report(report, "csv", tmp_path / "r.csv")
    stats = summarize_csv(tmp_path / "r.csv")
    assert stats.overhead_ratio is None
    assert stats.mean_lookahead == summarize(report).mean_lookahead


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit_report(make_report([1], [0]), "xml", tmp_path / "r.xml")


def test_oracle_csv(tmp_path, scenario):
    cfg = scenario(duration=2, truth={"loads": [8], "max_load": 0})
    path = tmp_path / "oracle.csv"
    emit_trajectory(avnmp.run_oracle(cfg), path)
    assert path.read_text().splitlines() == [
        "node,tick,queue_len,processed,inst_load",
        "n0,0,0,0,0",
        "n0,1,3,5,8",
        "n0,2,0,8,0",
    ]
