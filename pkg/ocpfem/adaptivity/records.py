# -*- coding: utf-8 -*-
"""
@description: per-level run records and log-log rate fits
"""
from dataclasses import asdict, dataclass, field
from typing import List

import numpy as np
import pandas as pd

from ocpfem.linalg.krylov import CSV_COLUMNS as REPORT_COLUMNS

CSV_COLUMNS = ['level', 'N', 'dofs', 'h_min', 'h_max', 'error', 'its_pcg', 'its_cg', 'its_gmres', 'its_bpcg',
               'seconds']
EXTRA_COLUMNS = ['vertices', 'marked', 'converged', 'regularization']

# solvers with an iteration column
ITERATION_COLUMNS = {'pcg': 'its_pcg', 'cg': 'its_cg', 'gmres': 'its_gmres', 'bpcg': 'its_bpcg'}


@dataclass
class RunRecord:
    """One refinement level. Iteration counts are -1 for solvers not run."""
    level: int
    N: int
    dofs: int
    h_min: float
    h_max: float
    error: float
    its_pcg: int = -1
    its_cg: int = -1
    its_gmres: int = -1
    its_bpcg: int = -1
    seconds: float = 0.0
    vertices: int = 0
    marked: int = 0
    converged: bool = True
    regularization: str = 'diffusion'
    # SolverReport rows of this level
    reports: List[dict] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.error < 0.0:
            raise ValueError("error must be nonnegative, got {}".format(self.error))
        if self.h_min > self.h_max:
            raise ValueError("h_min {} exceeds h_max {}".format(self.h_min, self.h_max))

    def set_iterations(self, name, iterations):
        column = ITERATION_COLUMNS.get(name)
        if column is not None:
            setattr(self, column, int(iterations))

    def to_row(self):
        row = asdict(self)
        row.pop('reports')
        return row


def records_to_frame(records) -> pd.DataFrame:
    """DataFrame with the level table columns first."""
    rows = [r.to_row() if isinstance(r, RunRecord) else dict(r) for r in records]
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS + EXTRA_COLUMNS)
    return frame


def reports_to_frame(records) -> pd.DataFrame:
    """One row per level and solver: level, method and the SolverReport columns."""
    rows = [dict(report, level=record.level) for record in records for report in record.reports]
    return pd.DataFrame(rows, columns=['level', 'method'] + list(REPORT_COLUMNS))


def fit_rate(records, x_field='dofs', y_field='error', window=None) -> float:
    """Least squares slope of log(y) against log(x) over the last `window` records."""
    frame = records if isinstance(records, pd.DataFrame) else records_to_frame(records)
    if window is not None:
        if window < 2:
            raise ValueError("rate window must cover at least 2 levels")
        frame = frame.tail(window)
    x = frame[x_field].to_numpy(dtype=float)
    y = frame[y_field].to_numpy(dtype=float)
    keep = (x > 0.0) & (y > 0.0)
    if np.count_nonzero(keep) < 2 or np.unique(x[keep]).size < 2:
        raise ValueError("rate fit needs at least 2 records with distinct positive {}".format(x_field))
    slope, _ = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return float(slope)
