from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class NodeState:
    """Queue model of one network node, in packets"""

    queue_len: int = 0
    processed: int = 0
    inst_load: int = 0

    def __post_init__(self):
        for name in ("queue_len", "processed", "inst_load"):
            if getattr(self, name) < 0:
                raise ValueError(f"NodeState.{name} must be >= 0, got {getattr(self, name)}")

    def as_dict(self):
        return {
            "queue_len": self.queue_len,
            "processed": self.processed,
            "inst_load": self.inst_load,
        }


def transition(
    state: NodeState, load: int, elapsed: int, capacity: int
) -> Tuple[NodeState, int]:
    """Advance a node by `elapsed` ticks of constant arrival `load`.

    Shared by logical processes, the ground truth and the sequential oracle
    so that all three agree to the packet.

    Returns
    -------
    (new_state, served)
    """

    if elapsed < 1:
        raise ValueError(f"elapsed must be >= 1 tick, got {elapsed}")

    arrivals = load * elapsed
    served = min(state.queue_len + arrivals, capacity * elapsed)
    new_state = NodeState(
        queue_len=state.queue_len + arrivals - served,
        processed=state.processed + served,
        inst_load=load,
    )
    return new_state, served
