"""Per-node protocol kernel.

A LogicalProcess executes the node model ahead of real time on the
streptichrons it receives, saves a state after every executed virtual time,
cancels its own output with anti-messages when it rolls back, and checks
its predictions against the measured state as real time catches up.
"""

import enum
import itertools
import logging

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

from ..errors import ProtocolError
from .messages import (
    AnnihilationOutcome,
    ConstantLoad,
    MessageQueue,
    Streptichron,
    annihilate,
    autoanaplasis_adjust,
    make_antimessage,
)
from .node import NodeState, transition
from .timebase import INFINITY, add_latency

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateRecord:
    at: int
    state: NodeState


class DeliveryKind(enum.Enum):
    ENQUEUED = "enqueued"
    ANNIHILATED = "annihilated"
    ROLLBACK_TRIGGERED = "rollback_triggered"


@dataclass(frozen=True)
class RollbackReport:
    restored_to: int
    anti_messages: Tuple[Streptichron, ...] = ()
    reinserted: int = 0
    discarded_states: int = 0


@dataclass(frozen=True)
class DeliveryEffect:
    kind: DeliveryKind
    # virtual time execution resumes from after a straggler
    to: Optional[int] = None
    report: Optional[RollbackReport] = None
    outcome: Optional[AnnihilationOutcome] = None


@dataclass(frozen=True)
class StepResult:
    blocked: bool
    lvt: int
    state: Optional[NodeState] = None
    consumed: Tuple[Streptichron, ...] = ()
    emissions: Tuple[Streptichron, ...] = ()


@dataclass(frozen=True)
class WithinTolerance:
    error: int


@dataclass(frozen=True)
class RolledBack:
    error: int
    restored_to: int
    report: RollbackReport
    # anti-message and replacement for the forward sent at restored_to
    resent: Tuple[Streptichron, ...] = ()


VerifyOutcome = Union[WithinTolerance, RolledBack]


@dataclass(frozen=True)
class FossilCounts:
    states: int = 0
    outputs: int = 0
    cache: int = 0
    consumed: int = 0


class LogicalProcess:
    def __init__(
        self,
        node: str,
        capacity: int,
        theta: int = 0,
        downstream: Optional[Tuple[str, int]] = None,
        id_source: Optional[Callable[[], int]] = None,
        initial_state: NodeState = NodeState(),
        time_limit=INFINITY,
    ):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        if theta < 0:
            raise ValueError(f"theta must be >= 0, got {theta}")

        self.node = node
        self.capacity = capacity
        self.theta = theta
        self.downstream = downstream
        # largest receive time a forward may carry
        self.time_limit = time_limit
        self.next_id = id_source or itertools.count(1).__next__

        self.lvt = 0
        self.input_queue = MessageQueue()
        self.output_log: List[Streptichron] = []
        self.state_queue: List[StateRecord] = [StateRecord(0, initial_state)]
        self.prediction_cache: Dict[int, NodeState] = {0: initial_state}
        # (virtual time, message) pairs executed so far, for re-execution
        self.consumed: List[Tuple[int, Streptichron]] = []

    def __repr__(self):
        return f"LogicalProcess(node={self.node!r}, lvt={self.lvt})"

    @property
    def state(self) -> NodeState:
        return self.state_queue[-1].state

    def head_time(self) -> Optional[int]:
        return self.input_queue.head_time()

    def prime_link(self) -> List[Streptichron]:
        """Zero-load messages for the ticks the outgoing link is initially empty"""

        if self.downstream is None:
            return []
        dst, latency = self.downstream
        primed = [
            Streptichron(
                id=self.next_id(),
                src=self.node,
                dst=dst,
                send_time=0,
                receive_time=t,
                sign=1,
                payload=ConstantLoad(0),
            )
            for t in range(1, latency + 1)
        ]
        self.output_log.extend(primed)
        return primed

    def deliver(self, m: Streptichron) -> DeliveryEffect:
        if m.dst != self.node:
            raise ProtocolError(f"message {m.id} for {m.dst!r} delivered to {self.node!r}")

        if m.receive_time <= self.lvt:
            # straggler: undo every event at or after its timestamp
            report = self.rollback(m.receive_time - 1)
            _, outcome = annihilate(self.input_queue, m)
            logger.debug(
                "%s: straggler %s (sign %d) at %d, restored to %d",
                self.node,
                m.id,
                m.sign,
                m.receive_time,
                report.restored_to,
            )
            return DeliveryEffect(
                DeliveryKind.ROLLBACK_TRIGGERED,
                to=m.receive_time,
                report=report,
                outcome=outcome,
            )

        _, outcome = annihilate(self.input_queue, m)
        if outcome is AnnihilationOutcome.ANNIHILATED:
            return DeliveryEffect(DeliveryKind.ANNIHILATED, outcome=outcome)
        return DeliveryEffect(DeliveryKind.ENQUEUED, outcome=outcome)

    def process_next(self, horizon) -> StepResult:
        head = self.input_queue.head_time()
        if head is None or head > horizon:
            return StepResult(blocked=True, lvt=self.lvt)

        batch = self.input_queue.pop_batch()
        elapsed = head - self.lvt
        if elapsed < 1:
            raise ProtocolError(f"{self.node}: head {head} not after lvt {self.lvt}")

        load = sum(m.evaluated_load() for m in batch)
        new_state, served = transition(self.state, load, elapsed, self.capacity)

        self.lvt = head
        self.state_queue.append(StateRecord(head, new_state))
        self.prediction_cache[head] = new_state
        self.consumed.extend((head, m) for m in batch)

        emissions = ()
        if self.downstream is not None:
            dst, latency = self.downstream
            forward = Streptichron(
                id=self.next_id(),
                src=self.node,
                dst=dst,
                send_time=head,
                receive_time=add_latency(head, latency, self.time_limit),
                sign=1,
                payload=ConstantLoad(served // elapsed),
            )
            self.output_log.append(forward)
            emissions = (forward,)

        return StepResult(
            blocked=False,
            lvt=head,
            state=new_state,
            consumed=tuple(batch),
            emissions=emissions,
        )

    def rollback(self, to: int) -> RollbackReport:
        if to >= self.lvt:
            raise ValueError(f"rollback target {to} must be below lvt {self.lvt}")

        discarded = 0
        while self.state_queue and self.state_queue[-1].at > to:
            self.state_queue.pop()
            discarded += 1
        if not self.state_queue:
            raise ProtocolError(
                f"{self.node}: no saved state at or before {to}; fossil collection passed GVT"
            )
        self.lvt = self.state_queue[-1].at

        cancelled = []
        while self.output_log and self.output_log[-1].send_time > self.lvt:
            cancelled.append(make_antimessage(self.output_log.pop()))
        cancelled.reverse()

        while self.prediction_cache:
            last = next(reversed(self.prediction_cache))
            if last <= self.lvt:
                break
            del self.prediction_cache[last]

        reinserted = 0
        while self.consumed and self.consumed[-1][0] > self.lvt:
            _, m = self.consumed.pop()
            annihilate(self.input_queue, m)
            reinserted += 1

        return RollbackReport(
            restored_to=self.lvt,
            anti_messages=tuple(cancelled),
            reinserted=reinserted,
            discarded_states=discarded,
        )

    def verify(
        self, real_now: int, actual: NodeState, actual_served: Optional[int] = None
    ) -> VerifyOutcome:
        """Check the cached prediction at `real_now` against the measured state.

        Past the tolerance, the process rolls back to `real_now`, takes `actual` as
        its state there and, when `actual_served` is given and differs from
        what it forwarded at `real_now`, cancels and re-sends that forward.
        """

        predicted = self.prediction_cache.get(real_now)
        if predicted is None:
            raise ProtocolError(f"{self.node}: no cached prediction at real tick {real_now}")

        error = abs(predicted.queue_len - actual.queue_len)
        if error <= self.theta:
            return WithinTolerance(error)

        if real_now < self.lvt:
            report = self.rollback(real_now)
        else:
            report = RollbackReport(restored_to=self.lvt)

        # the measured state is authoritative at real_now
        if self.state_queue[-1].at != real_now:
            raise ProtocolError(f"{self.node}: cache entry at {real_now} has no saved state")
        self.state_queue[-1] = StateRecord(real_now, actual)
        self.lvt = real_now
        self.prediction_cache[real_now] = actual
        resent = self._resend_forward(real_now, actual_served)

        logger.debug(
            "%s: tolerance violated at %d (error %d > %d)", self.node, real_now, error, self.theta
        )
        return RolledBack(error=error, restored_to=real_now, report=report, resent=resent)

    def _resend_forward(self, real_now, actual_served) -> Tuple[Streptichron, ...]:
        if self.downstream is None or actual_served is None:
            return ()
        if not self.output_log or self.output_log[-1].send_time != real_now:
            return ()
        sent = self.output_log[-1]
        if sent.evaluated_load() == actual_served:
            return ()

        self.output_log.pop()
        forward = Streptichron(
            id=self.next_id(),
            src=self.node,
            dst=sent.dst,
            send_time=real_now,
            receive_time=sent.receive_time,
            sign=1,
            payload=ConstantLoad(actual_served),
        )
        self.output_log.append(forward)
        return (make_antimessage(sent), forward)

    def adjust_pending(self, local_actual_load: int, alpha) -> int:
        """Apply autoanaplasis to every positive message waiting here"""

        pending = self.input_queue.positives()
        for m in pending:
            adjusted = autoanaplasis_adjust(m, local_actual_load, alpha, self.node)
            self.input_queue.replace(m, adjusted)
        return len(pending)

    def fossil_collect(self, gvt) -> FossilCounts:
        # keep the newest record strictly below gvt as the rollback floor
        floor = 0
        for i, record in enumerate(self.state_queue):
            if record.at < gvt:
                floor = i
            else:
                break
        states = floor
        if floor:
            del self.state_queue[:floor]

        outputs = 0
        while outputs < len(self.output_log) and self.output_log[outputs].send_time < gvt:
            outputs += 1
        del self.output_log[:outputs]

        cache = 0
        while self.prediction_cache:
            first = next(iter(self.prediction_cache))
            if first >= gvt:
                break
            del self.prediction_cache[first]
            cache += 1

        consumed = 0
        while consumed < len(self.consumed) and self.consumed[consumed][0] < gvt:
            consumed += 1
        del self.consumed[:consumed]

        return FossilCounts(states=states, outputs=outputs, cache=cache, consumed=consumed)
