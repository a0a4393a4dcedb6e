from . import emit
from . import report
from . import summary

from .emit import emit_report, emit_trajectory
from .report import MetricsReport
from .summary import SummaryStats, summarize, summarize_csv
