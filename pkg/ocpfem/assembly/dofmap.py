# -*- coding: utf-8 -*-
"""
@description: interior-vertex numbering of the P1 space with zero boundary values
"""
from dataclasses import dataclass

import numpy as np

from ocpfem.mesh.simplicial_mesh import SimplicialMesh
from ocpfem.utils.type_utils import check_vector


class EmptySystemError(ValueError):
    """The mesh has no interior vertex, the discrete space is trivial."""


@dataclass(frozen=True, eq=False)
class DofMap:
    mesh: SimplicialMesh
    interior: np.ndarray
    vertex_to_dof: np.ndarray

    @property
    def num_dofs(self) -> int:
        return self.interior.shape[0]

    @property
    def mesh_revision(self) -> str:
        return self.mesh.revision

    def extend(self, coeffs):
        """Vertex values of a dof vector, zero on the boundary."""
        coeffs = check_vector(coeffs, self.num_dofs, "dof vector")
        full = np.zeros(self.mesh.num_vertices)
        full[self.interior] = coeffs
        return full

    def restrict(self, values):
        """Interior entries of a vertex vector."""
        return check_vector(values, self.mesh.num_vertices, "vertex vector")[self.interior]

    def require_dofs(self):
        if self.num_dofs == 0:
            raise EmptySystemError("mesh {} has no interior vertices".format(self.mesh.revision))


def build_dofmap(mesh: SimplicialMesh) -> DofMap:
    interior = np.flatnonzero(~mesh.boundary_vertex_flags)
    vertex_to_dof = np.full(mesh.num_vertices, -1, dtype=np.int64)
    vertex_to_dof[interior] = np.arange(interior.shape[0])
    interior.setflags(write=False)
    vertex_to_dof.setflags(write=False)
    return DofMap(mesh, interior, vertex_to_dof)
