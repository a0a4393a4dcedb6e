import itertools
import logging

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..constants import DRIVER_ID, NOISE_STREAM
from ..core.messages import ConstantLoad, LinearLoad, Streptichron, as_fraction
from .traces import TruthTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictorSpec:
    kind: str = "perfect"
    rate: int = 0
    window: int = 2
    amplitude: int = 0
    seed: int = 0
    alpha: Fraction = Fraction(1, 2)
    delta: int = 10

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.delta < 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


class DrivingProcess:
    """Prediction source for one driven node.

    Each call to `predict` covers the ticks that entered the lookahead
    window since the previous call, so no tick is predicted twice.
    """

    def __init__(
        self,
        spec: PredictorSpec,
        entry_node: str,
        truth: Optional[TruthTrace] = None,
        index: int = 0,
        id_source: Optional[Callable[[], int]] = None,
    ):
        self.spec = spec
        self.entry_node = entry_node
        self.truth = truth if truth is not None else TruthTrace.zeros()
        self.index = index
        self.next_id = id_source or itertools.count(1).__next__
        self.last_predicted = 0
        # the driving process sends at real time, so its LVT is the real tick
        self.lvt = 0

    def __repr__(self):
        return (
            f"{type(self).__name__}(entry_node={self.entry_node!r}, "
            f"last_predicted={self.last_predicted})"
        )

    def predict(self, history: Sequence[Tuple[int, int]], real_now: int) -> List[Streptichron]:
        horizon = real_now + self.spec.delta
        ticks = range(max(self.last_predicted, real_now) + 1, horizon + 1)
        self.lvt = real_now
        if not ticks:
            return []

        self.prepare(history, real_now)
        messages = [
            Streptichron(
                id=self.next_id(),
                src=DRIVER_ID,
                dst=self.entry_node,
                send_time=real_now,
                receive_time=t,
                sign=1,
                payload=self.payload_for(t, real_now),
            )
            for t in ticks
        ]
        self.last_predicted = horizon
        return messages

    def prepare(self, history, real_now):
        pass

    def payload_for(self, t, real_now):
        raise NotImplementedError


class PerfectPredictor(DrivingProcess):
    def payload_for(self, t, real_now):
        return ConstantLoad(self.truth.load_at(t))


class ConstantRatePredictor(DrivingProcess):
    def payload_for(self, t, real_now):
        return ConstantLoad(self.spec.rate)


class LinearExtrapolationPredictor(DrivingProcess):
    """Least-squares line through the last `window` observations"""

    def prepare(self, history, real_now):
        points = list(history)[-self.spec.window :]
        if len(points) < self.spec.window:
            fallback = points[-1][1] if points else 0
            logger.warning(
                "%s: %d history points < window %d, predicting constant %d",
                self.entry_node,
                len(points),
                self.spec.window,
                fallback,
            )
            self.line = ConstantLoad(fallback)
            return

        base, slope = fit_line(points, real_now)
        self.line = LinearLoad(base=base, slope=slope, anchor=real_now)

    def payload_for(self, t, real_now):
        return self.line


class NoisyTracePredictor(DrivingProcess):
    def __init__(self, spec, entry_node, truth=None, index=0, id_source=None):
        super().__init__(spec, entry_node, truth, index, id_source)
        self.rng = np.random.default_rng([spec.seed, NOISE_STREAM, index])

    def payload_for(self, t, real_now):
        amp = self.spec.amplitude
        noise = int(self.rng.integers(-amp, amp, endpoint=True))
        return ConstantLoad(self.truth.load_at(t) + noise)


def fit_line(points, at) -> Tuple[Fraction, Fraction]:
    """Exact least-squares fit; returns (value at `at`, slope)"""

    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    n = len(points)
    x_mean = sum(xs) / n
    y_mean = sum(ys) / n
    sxx = sum((x - x_mean) ** 2 for x in xs)
    if sxx == 0:
        return y_mean, Fraction(0)
    slope = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys)) / sxx
    return y_mean + slope * (at - x_mean), slope
