"""Streptichrons: virtual messages carrying a load prediction.

A streptichron is immutable; cancellation produces a negative twin and
autoanaplasis (in-flight self-adjustment) produces a new value with the
adjustment appended to its audit log.
"""

import bisect
import enum
import logging
import math

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

from ..errors import ProtocolError

logger = logging.getLogger(__name__)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # decimal repr keeps 0.1 as 1/10 instead of its binary expansion
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ConstantLoad:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    def load_at(self, t) -> Fraction:
        return max(self.value, Fraction(0))

    def retarget(self, t, target: Fraction) -> "ConstantLoad":
        return ConstantLoad(target)


@dataclass(frozen=True)
class LinearLoad:
    """base + slope * (t - anchor); anchored at the sender's send_time"""

    base: Fraction
    slope: Fraction
    anchor: int

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "slope", as_fraction(self.slope))

    def load_at(self, t) -> Fraction:
        return max(self.base + self.slope * (t - self.anchor), Fraction(0))

    def retarget(self, t, target: Fraction) -> "LinearLoad":
        # keep the slope, move the line so it passes through (t, target)
        return LinearLoad(
            base=target - self.slope * (t - self.anchor),
            slope=self.slope,
            anchor=self.anchor,
        )


PredictionPayload = Union[ConstantLoad, LinearLoad]


def evaluate_load(payload: PredictionPayload, t) -> int:
    """Integer packets/tick fed to the node transition (clamped, floored)"""
    return math.floor(payload.load_at(t))


@dataclass(frozen=True)
class Adjustment:
    node: str
    before: PredictionPayload
    after: PredictionPayload


@dataclass(frozen=True)
class Streptichron:
    id: int
    src: str
    dst: str
    send_time: int
    receive_time: int
    sign: int
    payload: PredictionPayload
    adjustments: Tuple[Adjustment, ...] = field(default=())

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.receive_time <= self.send_time:
            raise ValueError(
                f"receive_time {self.receive_time} must exceed send_time {self.send_time}"
            )

    @property
    def is_anti(self):
        return self.sign < 0

    @property
    def sort_key(self):
        return (self.receive_time, self.id, self.sign)

    def evaluated_load(self) -> int:
        return evaluate_load(self.payload, self.receive_time)


@dataclass(frozen=True)
class RealTrafficEvent:
    """Ground-truth arrival: `load` packets/tick reaching `dst` at real tick `at`"""

    dst: str
    at: int
    load: int

    def __post_init__(self):
        if self.load < 0:
            raise ValueError(f"load must be >= 0, got {self.load}")


class AnnihilationOutcome(enum.Enum):
    ANNIHILATED = "annihilated"
    ENQUEUED = "enqueued"


class MessageQueue:
    """Input queue ordered by (receive_time, id, sign).

    Positive messages wait to be processed; anti-messages whose twin has
    not arrived yet are parked here too and never processed.
    """

    def __init__(self, messages=()):
        self._keys = []
        self._items = []
        self._positive = {}
        self._parked = {}
        for m in messages:
            self.insert(m)

    def __len__(self):
        return len(self._items)

    def __iter__(self) -> Iterator[Streptichron]:
        return iter(list(self._items))

    def __repr__(self):
        return f"MessageQueue({self._items!r})"

    def insert(self, m: Streptichron):
        key = m.sort_key
        i = bisect.bisect_left(self._keys, key)
        if i < len(self._keys) and self._keys[i] == key:
            raise ProtocolError(f"message {m.id} (sign {m.sign}) queued twice")
        self._keys.insert(i, key)
        self._items.insert(i, m)
        (self._parked if m.is_anti else self._positive)[m.id] = m

    def remove(self, m: Streptichron):
        i = bisect.bisect_left(self._keys, m.sort_key)
        if i == len(self._keys) or self._keys[i] != m.sort_key:
            raise KeyError(m.id)
        del self._keys[i]
        del self._items[i]
        del (self._parked if m.is_anti else self._positive)[m.id]

    def twin_of(self, m: Streptichron) -> Optional[Streptichron]:
        return (self._positive if m.is_anti else self._parked).get(m.id)

    def replace(self, old: Streptichron, new: Streptichron):
        self.remove(old)
        self.insert(new)

    def positives(self) -> List[Streptichron]:
        return [m for m in self._items if not m.is_anti]

    def parked(self) -> List[Streptichron]:
        return [m for m in self._items if m.is_anti]

    def head_time(self) -> Optional[int]:
        for m in self._items:
            if not m.is_anti:
                return m.receive_time
        return None

    def pop_batch(self) -> List[Streptichron]:
        """Remove and return every positive message at the head receive time"""

        head = self.head_time()
        if head is None:
            return []

        end = bisect.bisect_left(self._keys, (head + 1,))
        front = self._items[:end]
        batch = [m for m in front if m.receive_time == head and not m.is_anti]
        keep = [m for m in front if m.receive_time != head or m.is_anti]
        self._items[:end] = keep
        self._keys[:end] = [m.sort_key for m in keep]
        for m in batch:
            del self._positive[m.id]
        return batch


def make_antimessage(m: Streptichron) -> Streptichron:
    if m.sign != 1:
        raise ProtocolError(f"message {m.id} is already an anti-message")
    return replace(m, sign=-1, adjustments=())


def annihilate(
    queue: MessageQueue, incoming: Streptichron
) -> Tuple[MessageQueue, AnnihilationOutcome]:
    """Cancel `incoming` against its opposite-sign twin, or enqueue it.

    The queue is updated in place and returned for convenience.
    """

    twin = queue.twin_of(incoming)
    if twin is not None:
        queue.remove(twin)
        logger.debug("annihilated message %s at %s", incoming.id, incoming.dst)
        return queue, AnnihilationOutcome.ANNIHILATED

    queue.insert(incoming)
    return queue, AnnihilationOutcome.ENQUEUED


def autoanaplasis_adjust(
    m: Streptichron, local_actual_load, alpha, at_node: str
) -> Streptichron:
    """Blend the carried prediction toward the load measured at `at_node`.

    The evaluated load at the receive time becomes
    alpha * local_actual_load + (1 - alpha) * old evaluated load.
    """

    if m.is_anti:
        raise ProtocolError(f"anti-message {m.id} cannot be adjusted")
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")

    old_load = m.payload.load_at(m.receive_time)
    target = alpha * as_fraction(local_actual_load) + (1 - alpha) * old_load
    payload = m.payload.retarget(m.receive_time, target)
    entry = Adjustment(node=at_node, before=m.payload, after=payload)
    return replace(m, payload=payload, adjustments=m.adjustments + (entry,))


def replay_adjustments(original: PredictionPayload, log) -> PredictionPayload:
    """Walk an adjustment log from the original payload, checking continuity"""

    payload = original
    for entry in log:
        if entry.before != payload:
            raise ProtocolError(f"adjustment at {entry.node} does not follow its predecessor")
        payload = entry.after
    return payload
