import json
import logging
import os

import pandas as pd

from ..constants import ORACLE_COLUMNS, REPORT_FORMATS
from .report import MetricsReport

logger = logging.getLogger(__name__)


def emit_report(report: MetricsReport, fmt: str, path):
    """Write `report` as CSV or JSON; equal reports give identical bytes.

    OSError from an unwritable path propagates with the OS detail.
    """

    fmt = fmt.lower()
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"format must be one of {REPORT_FORMATS}, got {fmt!r}")

    if fmt == "csv":
        report.to_frame().to_csv(path, index=False)
    else:
        with open(path, "w") as f:
            json.dump(report.as_dict(), f, indent=2)
            f.write("\n")
    logger.info("wrote %s report to %s", fmt, os.fspath(path))


def trajectory_frame(trajectory) -> pd.DataFrame:
    rows = [
        {"node": node, "tick": tick, **state.as_dict()}
        for (node, tick), state in sorted(trajectory.items())
    ]
    return pd.DataFrame(rows, columns=ORACLE_COLUMNS)


def emit_trajectory(trajectory, path):
    trajectory_frame(trajectory).to_csv(path, index=False)
    logger.info("wrote oracle trajectory to %s", os.fspath(path))
