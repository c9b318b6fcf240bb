# -*- coding: utf-8 -*-
"""
@description: elementwise L2 error indicators and maximum marking
"""
from dataclasses import dataclass

import numpy as np

from ocpfem.assembly import element_l2_errors_sq
from ocpfem.ocp import OcpProblem, OcpSolution
from ocpfem.utils.type_utils import is_unit_interval


@dataclass(frozen=True)
class MarkingRule:
    """Maximum strategy: mark eta_l > theta * max eta, 0 < theta <= 1."""
    theta: float = 0.5

    def __post_init__(self):
        if not is_unit_interval(self.theta):
            raise ValueError("theta must lie in (0, 1], got {!r}".format(self.theta))


def compute_indicators(problem: OcpProblem, solution: OcpSolution) -> np.ndarray:
    """eta_l = ||u - u_bar||_L2(tau_l) for every element."""
    if solution.revision != problem.revision:
        raise ValueError("solution of mesh {} used on mesh {}".format(solution.revision, problem.revision))
    return np.sqrt(element_l2_errors_sq(problem.mesh, problem.dofmap, solution.u, problem.target,
                                        problem.quadrature))


def mark(indicators, rule: MarkingRule = MarkingRule()) -> np.ndarray:
    """
    Sorted indices with eta_l > theta * max eta.

    For theta = 1 the strict test selects nothing, the argmax set is
    returned instead. All-zero indicators give an empty selection.
    """
    eta = np.asarray(indicators, dtype=float)
    if eta.ndim != 1 or eta.size == 0:
        raise ValueError("marking needs a nonempty list of indicators")
    if np.any(eta < 0.0) or not np.all(np.isfinite(eta)):
        raise ValueError("indicators must be finite and nonnegative")
    top = eta.max()
    if top <= 0.0:
        return np.zeros(0, dtype=np.int64)
    threshold = rule.theta * top
    marked = np.flatnonzero(eta > threshold)
    if marked.size == 0:
        marked = np.flatnonzero(eta >= threshold)
    return marked
