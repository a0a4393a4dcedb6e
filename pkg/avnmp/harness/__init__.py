from . import engine
from . import oracle
from . import topology

from .engine import NotAvailable, NotAvailableReason, SimEngine, StepSummary
from .oracle import GroundTruth, sequential_oracle
from .topology import Link, Topology
