"""Deterministic single-threaded AVNMP scheduler.

Each `step` first delivers every message in transit, then either lets the
logical process with the smallest head receive time execute one event
(within the lookahead horizon real_now + delta), or, when nothing can run,
advances real time by one tick, applies the real traffic, verifies every
logical process against it and asks the driving processes for the newly
uncovered part of the window.
"""

import enum
import logging

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from tqdm import tqdm

from ..constants import ERROR_COLUMN_PREFIX
from ..core.logical_process import DeliveryKind, LogicalProcess, RolledBack
from ..core.messages import AnnihilationOutcome, Streptichron, as_fraction
from ..core.node import NodeState
from ..core.timebase import GvtSnapshot, RealClock, advance_real_time, check_time, compute_gvt
from ..drivers.predictors import DrivingProcess
from ..errors import GvtViolation, ProtocolError, UnknownNodeError
from .oracle import GroundTruth
from .topology import Topology

logger = logging.getLogger(__name__)


class Branch(enum.Enum):
    PROCESS = "process"
    ADVANCE = "advance"


@dataclass(frozen=True)
class StepSummary:
    branch: Branch
    rollbacks: int
    real_now: int
    min_lvt: int
    gvt: int
    node: Optional[str] = None


class NotAvailableReason(enum.Enum):
    BEYOND_LVT = "BeyondLVT"
    FOSSILIZED = "Fossilized"


@dataclass(frozen=True)
class NotAvailable:
    reason: NotAvailableReason

    def __str__(self):
        return f"NotAvailable({self.reason.value})"


@dataclass
class Counters:
    emitted: int = 0
    anti_emitted: int = 0
    delivered: int = 0
    annihilated: int = 0
    tolerance_rollbacks: int = 0
    straggler_rollbacks: int = 0
    adjusted: int = 0
    fossil_states: int = 0
    fossil_outputs: int = 0
    fossil_cache: int = 0
    fossil_consumed: int = 0

    @property
    def rollbacks(self):
        return self.tolerance_rollbacks + self.straggler_rollbacks


def _delivery_order(m: Streptichron):
    return (m.dst, m.receive_time, m.id, m.sign)


class SimEngine:
    def __init__(
        self,
        cfg,
        topology: Topology,
        lps: Mapping[str, LogicalProcess],
        drivers: Mapping[str, DrivingProcess],
        ground_truth: GroundTruth,
    ):
        self.cfg = cfg
        self.topology = topology
        self.lps: Dict[str, LogicalProcess] = dict(sorted(lps.items()))
        self.drivers: Dict[str, DrivingProcess] = dict(sorted(drivers.items()))
        self.ground_truth = ground_truth

        self.duration = cfg.duration
        self.delta = cfg.predictor.delta
        self.gvt_every = cfg.gvt_every
        self.alpha = as_fraction(cfg.predictor.alpha)

        self.clock = RealClock(0)
        self.in_transit: List[Streptichron] = []
        self.history: Dict[str, List[Tuple[int, int]]] = {node: [] for node in self.drivers}
        self.counters = Counters()
        self.steps = 0
        self.finished = False

        self.gvt_history: List[GvtSnapshot] = [GvtSnapshot(gvt=0, computed_at=0)]
        self.verified_states: Dict[Tuple[str, int], NodeState] = {}
        self.actual_states: Dict[Tuple[str, int], NodeState] = {}
        self.rows: List[dict] = []

        for node, lp in self.lps.items():
            self.verified_states[(node, 0)] = lp.state
            self.actual_states[(node, 0)] = ground_truth.states[node]
            self._send(lp.prime_link())
        self._predict()

    def __repr__(self):
        return (
            f"SimEngine(real_now={self.real_now}, min_lvt={self.min_lvt}, "
            f"gvt={self.gvt}, finished={self.finished})"
        )

    @property
    def real_now(self) -> int:
        return self.clock.now

    @property
    def gvt(self):
        return self.gvt_history[-1].gvt

    @property
    def min_lvt(self) -> int:
        return min(lp.lvt for lp in self.lps.values())

    @property
    def horizon(self) -> int:
        return self.real_now + self.delta

    def _send(self, messages):
        for m in messages:
            if m.is_anti:
                self.counters.anti_emitted += 1
            else:
                self.counters.emitted += 1
        self.in_transit.extend(messages)

    def _predict(self):
        for node, driver in self.drivers.items():
            self._send(driver.predict(self.history[node], self.real_now))

    def _deliver_in_transit(self) -> int:
        rollbacks = 0
        while self.in_transit:
            batch = sorted(self.in_transit, key=_delivery_order)
            self.in_transit = []
            for m in batch:
                if m.receive_time < self.gvt:
                    raise GvtViolation(
                        f"message {m.id} to {m.dst} at {m.receive_time} is below GVT {self.gvt}"
                    )
                effect = self.lps[m.dst].deliver(m)
                self.counters.delivered += 1
                if effect.outcome is AnnihilationOutcome.ANNIHILATED:
                    self.counters.annihilated += 1
                if effect.kind is DeliveryKind.ROLLBACK_TRIGGERED:
                    rollbacks += 1
                    self.counters.straggler_rollbacks += 1
                    self._send(effect.report.anti_messages)
        return rollbacks

    def _next_ready(self) -> Optional[str]:
        ready = []
        for node, lp in self.lps.items():
            head = lp.head_time()
            if head is not None and head <= self.horizon:
                ready.append((head, node))
        return min(ready)[1] if ready else None

    def _advance(self) -> int:
        self.clock = advance_real_time(self.clock, 1)
        t = self.real_now
        actual = self.ground_truth.advance()
        for event in self.ground_truth.traffic:
            if event.dst in self.history:
                self.history[event.dst].append((event.at, event.load))

        rollbacks = 0
        errors = {}
        for node, lp in self.lps.items():
            predicted = lp.prediction_cache.get(t)
            outcome = lp.verify(t, actual[node], self.ground_truth.served.get((node, t)))
            self.verified_states[(node, t)] = predicted
            self.actual_states[(node, t)] = actual[node]
            errors[node] = outcome.error
            if isinstance(outcome, RolledBack):
                rollbacks += 1
                self.counters.tolerance_rollbacks += 1
                self._send(outcome.report.anti_messages)
                self._send(outcome.resent)
                self.counters.adjusted += lp.adjust_pending(actual[node].inst_load, self.alpha)

        min_lvt = self.min_lvt
        row = {
            "tick": t,
            "real_now": t,
            "min_lvt": min_lvt,
            "gvt": self.gvt,
            "lookahead": min_lvt - t,
            "rollbacks_cum": self.counters.rollbacks,
        }
        row.update({f"{ERROR_COLUMN_PREFIX}{node}": errors[node] for node in self.lps})
        self.rows.append(row)

        if t >= self.duration:
            self.finished = True
        else:
            self._predict()
        return rollbacks

    def collect_fossils(self) -> GvtSnapshot:
        lvts = [lp.lvt for lp in self.lps.values()]
        lvts += [driver.lvt for driver in self.drivers.values()]
        snapshot = compute_gvt(lvts, [m.receive_time for m in self.in_transit], self.clock)
        if snapshot.gvt < self.gvt:
            raise GvtViolation(f"GVT moved backwards from {self.gvt} to {snapshot.gvt}")
        self.gvt_history.append(snapshot)

        for lp in self.lps.values():
            counts = lp.fossil_collect(snapshot.gvt)
            self.counters.fossil_states += counts.states
            self.counters.fossil_outputs += counts.outputs
            self.counters.fossil_cache += counts.cache
            self.counters.fossil_consumed += counts.consumed
        logger.debug("GVT %s at real tick %d", snapshot.gvt, snapshot.computed_at)
        return snapshot

    def step(self) -> StepSummary:
        if self.finished:
            raise ProtocolError(f"engine already finished at real tick {self.real_now}")

        rollbacks = self._deliver_in_transit()
        node = self._next_ready()
        if node is not None:
            result = self.lps[node].process_next(self.horizon)
            self._send(result.emissions)
            branch = Branch.PROCESS
        else:
            rollbacks += self._advance()
            branch = Branch.ADVANCE

        self.steps += 1
        if self.steps % self.gvt_every == 0:
            self.collect_fossils()

        return StepSummary(
            branch=branch,
            rollbacks=rollbacks,
            real_now=self.real_now,
            min_lvt=self.min_lvt,
            gvt=self.gvt,
            node=node,
        )

    def run(self):
        with tqdm(
            total=self.duration,
            desc=self.cfg.experiment_name,
            unit="tick",
            disable=not self.cfg.progress,
        ) as progress:
            while not self.finished:
                summary = self.step()
                if summary.branch is Branch.ADVANCE:
                    progress.update(1)
        logger.info(
            "%s finished at tick %d: %d tolerance / %d straggler rollbacks",
            self.cfg.experiment_name,
            self.real_now,
            self.counters.tolerance_rollbacks,
            self.counters.straggler_rollbacks,
        )
        return self

    def conservation(self) -> dict:
        """Reconcile every delivered message with where it ended up.

        A delivered positive is consumed (possibly fossil collected since),
        still queued, or annihilated; a delivered anti-message is parked or
        annihilated. Each annihilation removes one message of each sign.
        """

        c = self.counters
        in_transit = len(self.in_transit)
        consumed = c.fossil_consumed + sum(len(lp.consumed) for lp in self.lps.values())
        queued = sum(len(lp.input_queue.positives()) for lp in self.lps.values())
        parked = sum(len(lp.input_queue.parked()) for lp in self.lps.values())
        sent = c.emitted + c.anti_emitted
        accounted = consumed + queued + parked + 2 * c.annihilated
        return {
            "emitted": c.emitted,
            "anti_emitted": c.anti_emitted,
            "delivered": c.delivered,
            "annihilated_pairs": c.annihilated,
            "consumed": consumed,
            "queued": queued,
            "in_transit": in_transit,
            "unmatched_anti": parked,
            "balanced": sent == c.delivered + in_transit and c.delivered == accounted,
        }

    def query_predicted(self, node: str, t: int) -> Union[NodeState, NotAvailable]:
        """Predicted state of `node` at virtual time `t` (the future MIB)"""

        if node not in self.lps:
            raise UnknownNodeError(node)
        check_time(t)
        lp = self.lps[node]
        if t > lp.lvt:
            return NotAvailable(NotAvailableReason.BEYOND_LVT)
        state = lp.prediction_cache.get(t)
        if state is None:
            return NotAvailable(NotAvailableReason.FOSSILIZED)
        return state


def query_predicted(engine: SimEngine, node: str, t: int) -> Union[NodeState, NotAvailable]:
    return engine.query_predicted(node, t)
