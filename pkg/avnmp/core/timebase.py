"""Virtual and real time on one shared integer tick axis.

Virtual times are plain non-negative ints; `INFINITY` stands for "no
pending activity" and compares greater than every tick.
"""

import math

from dataclasses import dataclass
from typing import Iterable, Union

VirtualTime = int

INFINITY = math.inf


def check_time(t, name="t"):
    if t == INFINITY:
        return t
    if isinstance(t, bool) or not isinstance(t, int):
        raise TypeError(f"{name} must be an integer tick, got {t!r}")
    if t < 0:
        raise ValueError(f"{name} must be non-negative, got {t}")
    return t


def add_latency(t: VirtualTime, latency: int, limit: Union[int, float] = INFINITY):
    """Shift a finite virtual time by a link latency, checked against `limit`"""

    if t == INFINITY:
        raise ValueError("cannot shift INFINITY by a latency")
    check_time(t)
    if latency < 1:
        raise ValueError(f"latency must be >= 1, got {latency}")
    shifted = t + latency
    if shifted > limit:
        raise OverflowError(f"virtual time {shifted} exceeds limit {limit}")
    return shifted


@dataclass(frozen=True)
class RealClock:
    """Simulated wall clock; only `advance_real_time` moves it"""

    now: int = 0

    def __post_init__(self):
        check_time(self.now, "now")


@dataclass(frozen=True)
class GvtSnapshot:
    gvt: Union[int, float]
    computed_at: int


def advance_real_time(clock: RealClock, dt: int) -> RealClock:
    if isinstance(dt, bool) or not isinstance(dt, int) or dt < 1:
        raise ValueError(f"dt must be a positive integer tick count, got {dt!r}")
    return RealClock(clock.now + dt)


def compute_gvt(
    lvt_list: Iterable[VirtualTime],
    in_transit_receive_times: Iterable[VirtualTime],
    real_now: RealClock,
) -> GvtSnapshot:
    """Lower bound on every time a rollback may still reach.

    Parameters
    ----------
    lvt_list:
        local virtual times of every process that can still send
    in_transit_receive_times:
        receive times of messages not yet delivered
    real_now:
        the real clock; used as the GVT when nothing is active

    Returns
    -------
    snapshot : GvtSnapshot
    """

    lvts = list(lvt_list)
    in_transit = list(in_transit_receive_times)
    if not lvts and not in_transit:
        return GvtSnapshot(gvt=real_now.now, computed_at=real_now.now)

    gvt = min(min(lvts, default=INFINITY), min(in_transit, default=INFINITY))
    return GvtSnapshot(gvt=gvt, computed_at=real_now.now)
