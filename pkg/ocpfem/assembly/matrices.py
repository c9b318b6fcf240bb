# -*- coding: utf-8 -*-
"""
@description: P1 stiffness, weighted stiffness and mass matrices

Local matrices are closed-form; global matrices are accumulated from
(row, col)-sorted triplets so that every entry is summed in element order,
which keeps the result exactly symmetric.
"""
import numpy as np
import scipy.sparse as sp

from ocpfem.assembly.dofmap import DofMap
from ocpfem.assembly.regularization import RegularizationField
from ocpfem.mesh.simplicial_mesh import SimplicialMesh


def barycentric_gradients(mesh: SimplicialMesh) -> np.ndarray:
    """(N, n+1, n) gradients of the element barycentric coordinates."""
    coords = mesh.vertices[mesh.elements]
    edges = coords[:, 1:, :] - coords[:, :1, :]
    inv_t = np.transpose(np.linalg.inv(edges), (0, 2, 1))
    grads = np.empty(coords.shape)
    grads[:, 1:, :] = inv_t
    grads[:, 0, :] = -inv_t.sum(axis=1)
    return grads


def local_stiffness(mesh: SimplicialMesh) -> np.ndarray:
    grads = barycentric_gradients(mesh)
    return mesh.volumes[:, None, None] * np.einsum('eik,ejk->eij', grads, grads)


def local_mass(mesh: SimplicialMesh) -> np.ndarray:
    n1 = mesh.dim + 1
    ref = (np.ones((n1, n1)) + np.eye(n1)) / ((n1) * (n1 + 1))
    return mesh.volumes[:, None, None] * ref[None, :, :]


def _assemble(mesh: SimplicialMesh, local: np.ndarray, dofmap: DofMap = None) -> sp.csr_matrix:
    n1 = mesh.dim + 1
    if dofmap is None:
        numbering = np.arange(mesh.num_vertices)
        size = mesh.num_vertices
    else:
        dofmap.require_dofs()
        numbering = dofmap.vertex_to_dof
        size = dofmap.num_dofs
    dofs = numbering[mesh.elements]
    rows = np.repeat(dofs, n1, axis=1).ravel()
    cols = np.tile(dofs, (1, n1)).ravel()
    data = local.ravel()
    keep = (rows >= 0) & (cols >= 0)
    rows, cols, data = rows[keep], cols[keep], data[keep]

    order = np.lexsort((cols, rows))
    rows, cols, data = rows[order], cols[order], data[order]
    key = rows * size + cols
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    values = np.add.reduceat(data, starts) if data.size else data
    indptr = np.zeros(size + 1, dtype=np.int64)
    np.add.at(indptr, rows[starts] + 1, 1)
    indptr = np.cumsum(indptr)
    matrix = sp.csr_matrix((values, cols[starts], indptr), shape=(size, size))
    matrix.has_sorted_indices = True
    matrix.eliminate_zeros()
    return matrix


def assemble_stiffness(mesh: SimplicialMesh, dofmap: DofMap = None) -> sp.csr_matrix:
    """K_h[j,k] = int grad phi_k . grad phi_j; all vertices when dofmap is None."""
    return _assemble(mesh, local_stiffness(mesh), dofmap)


def assemble_weighted_stiffness(mesh: SimplicialMesh, dofmap: DofMap, rho: RegularizationField) -> sp.csr_matrix:
    """K_rho_h[j,k] = int (1/rho) grad phi_k . grad phi_j for piecewise constant rho."""
    if len(rho) != mesh.num_elements:
        raise ValueError("regularization field has {} values for {} elements".format(len(rho), mesh.num_elements))
    if np.any(rho.values <= 0.0):
        raise ValueError("regularization values must be strictly positive")
    local = local_stiffness(mesh) / rho.values[:, None, None]
    return _assemble(mesh, local, dofmap)


def assemble_mass(mesh: SimplicialMesh, dofmap: DofMap = None) -> sp.csr_matrix:
    """M_h[j,k] = int phi_k phi_j."""
    return _assemble(mesh, local_mass(mesh), dofmap)


def lump_mass(mass: sp.spmatrix) -> sp.dia_matrix:
    """Diagonal matrix of the row sums of a mass matrix."""
    sums = np.asarray(mass.sum(axis=1)).ravel()
    if np.any(sums <= 0.0):
        bad = int(np.flatnonzero(sums <= 0.0)[0])
        raise ValueError("nonpositive row sum {} in row {}, mesh is broken".format(sums[bad], bad))
    return sp.diags(sums, format='dia')


def diag_mass(mass: sp.spmatrix) -> sp.dia_matrix:
    """Diagonal part of a mass matrix."""
    diagonal = mass.diagonal()
    if np.any(diagonal <= 0.0):
        raise ValueError("mass matrix has a nonpositive diagonal entry")
    return sp.diags(diagonal, format='dia')


def element_mass_coefficient(dim):
    """Scale c of the local mass matrix c * volume * (1 + delta_ij)."""
    return 1.0 / ((dim + 1) * (dim + 2))
