from . import logical_process
from . import messages
from . import node
from . import timebase

from .logical_process import LogicalProcess
from .messages import ConstantLoad, LinearLoad, MessageQueue, Streptichron
from .node import NodeState, transition
from .timebase import INFINITY, GvtSnapshot, RealClock, advance_real_time, compute_gvt
