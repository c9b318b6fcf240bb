# -*- coding: utf-8 -*-
"""
@description: piecewise constant regularization functions rho(x)
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ocpfem.mesh.simplicial_mesh import SimplicialMesh
from ocpfem.utils.type_utils import is_pos_float

VARIABLE_LOCAL = 'variable_local'
CONSTANT = 'constant'
SCALED_LOCAL = 'scaled_local'
MODES = (VARIABLE_LOCAL, CONSTANT, SCALED_LOCAL)


@dataclass(frozen=True, eq=False)
class RegularizationField:
    """
    Per-element values rho_l > 0 (units length^2).

    mode: 'variable_local' (rho_l = h_l^2), 'constant' (rho_l = parameter)
    or 'scaled_local' (rho_l = parameter * h_l^2).
    """
    values: np.ndarray
    mode: str
    parameter: Optional[float] = None
    mesh_revision: Optional[str] = None

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("regularization values must be one per element")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise ValueError("regularization values must be strictly positive")
        if self.mode not in MODES:
            raise ValueError("unknown regularization mode {!r}, expected one of {}".format(self.mode, MODES))
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.values.shape[0]

    @property
    def lower(self):
        return float(self.values.min())

    @property
    def upper(self):
        return float(self.values.max())

    @property
    def is_constant(self):
        return self.mode == CONSTANT


def build_regularization_field(mesh: SimplicialMesh, mode=VARIABLE_LOCAL, parameter=None) -> RegularizationField:
    """
    rho per element for the given mode.

    'constant' needs the value rho, 'scaled_local' the factor epsilon.
    """
    if mode == VARIABLE_LOCAL:
        values = mesh.mesh_sizes ** 2
    elif mode == CONSTANT:
        if not is_pos_float(parameter):
            raise ValueError("constant regularization needs rho > 0, got {!r}".format(parameter))
        values = np.full(mesh.num_elements, float(parameter))
    elif mode == SCALED_LOCAL:
        if not is_pos_float(parameter):
            raise ValueError("scaled regularization needs epsilon > 0, got {!r}".format(parameter))
        values = float(parameter) * mesh.mesh_sizes ** 2
    else:
        raise ValueError("unknown regularization mode {!r}, expected one of {}".format(mode, MODES))
    return RegularizationField(values, mode, parameter, mesh.revision)
