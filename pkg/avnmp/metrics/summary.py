from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from ..constants import ERROR_COLUMN_PREFIX
from .report import MetricsReport


@dataclass(frozen=True)
class SummaryStats:
    ticks: int
    mean_lookahead: float
    max_lookahead: int
    rollbacks: int
    mean_abs_error: float
    max_abs_error: int
    # only known from run totals, None when recomputed from a CSV alone
    tolerance_rollbacks: Optional[int] = None
    straggler_rollbacks: Optional[int] = None
    overhead_ratio: Optional[float] = None


def _summarize_frame(df: pd.DataFrame, totals: Optional[Mapping[str, int]] = None) -> SummaryStats:
    if df.empty:
        raise ValueError("cannot summarize an empty series")

    lookahead = df["lookahead"].to_numpy()
    errors = df[[c for c in df.columns if c.startswith(ERROR_COLUMN_PREFIX)]].to_numpy()
    abs_errors = np.abs(errors)

    extra = {}
    if totals is not None:
        messages = totals["messages"]
        anti = totals["anti_messages"]
        sent = messages + anti
        extra = {
            "tolerance_rollbacks": int(totals["tolerance_rollbacks"]),
            "straggler_rollbacks": int(totals["straggler_rollbacks"]),
            "overhead_ratio": float(anti / sent) if sent else 0.0,
        }

    return SummaryStats(
        ticks=len(df),
        mean_lookahead=float(lookahead.mean()),
        max_lookahead=int(lookahead.max()),
        rollbacks=int(df["rollbacks_cum"].iloc[-1]),
        mean_abs_error=float(abs_errors.mean()) if abs_errors.size else 0.0,
        max_abs_error=int(abs_errors.max()) if abs_errors.size else 0,
        **extra,
    )


def summarize(report: MetricsReport) -> SummaryStats:
    """Mean/max lookahead, rollback counts, verification error and overhead.

    Raises
    ------
    ValueError
        if the report has no per-tick rows
    """
    return _summarize_frame(report.to_frame(), report.totals)


def summarize_csv(path, totals: Optional[Mapping[str, int]] = None) -> SummaryStats:
    """Recompute `summarize` from an emitted CSV report.

    Pass the run totals (e.g. from the JSON report) to get the rollback
    split and the overhead ratio as well.
    """
    return _summarize_frame(pd.read_csv(path), totals)
