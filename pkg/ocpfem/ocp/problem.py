# -*- coding: utf-8 -*-
"""
@description: the optimal control problem on one mesh and its discrete system
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ocpfem.assembly import (DofMap, QuadratureSpec, RegularizationField, TargetFunction, assemble_load,
                             assemble_mass, assemble_stiffness, assemble_weighted_stiffness, build_dofmap,
                             build_regularization_field, diag_mass, lump_mass)
from ocpfem.assembly.regularization import VARIABLE_LOCAL
from ocpfem.linalg import InverseOperator, as_operator, schur_complement_operator
from ocpfem.mesh import SimplicialMesh
from ocpfem.utils.logger import logger


@dataclass(frozen=True, eq=False)
class OcpProblem:
    mesh: SimplicialMesh
    dofmap: DofMap
    target: TargetFunction
    rho: RegularizationField
    quadrature: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        if len(self.rho) != self.mesh.num_elements:
            raise ValueError("regularization field has {} values for {} elements".format(
                len(self.rho), self.mesh.num_elements))
        if self.dofmap.mesh_revision != self.mesh.revision:
            raise ValueError("dofmap belongs to mesh {}, not {}".format(self.dofmap.mesh_revision, self.mesh.revision))
        if self.rho.mesh_revision is not None and self.rho.mesh_revision != self.mesh.revision:
            raise ValueError("regularization field belongs to mesh {}".format(self.rho.mesh_revision))

    @property
    def revision(self):
        return self.mesh.revision

    @property
    def num_dofs(self):
        return self.dofmap.num_dofs


def build_problem(mesh: SimplicialMesh, target: TargetFunction, mode=VARIABLE_LOCAL, parameter=None,
                  quadrature: QuadratureSpec = None) -> OcpProblem:
    """Problem with rho rebuilt from the geometry of `mesh`."""
    rho = build_regularization_field(mesh, mode, parameter)
    return OcpProblem(mesh, build_dofmap(mesh), target, rho, quadrature or QuadratureSpec())


@dataclass(frozen=True, eq=False)
class DiscreteSystem:
    """
    K_h, K_rho_h, M_h, the diagonal approximations of M_h, the load f and
    the action of K_rho_h^{-1}, all on the interior dofs of one mesh.
    """
    problem: OcpProblem
    stiffness: sp.csr_matrix
    weighted_stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    lumped_mass: sp.dia_matrix
    diagonal_mass: sp.dia_matrix
    load: np.ndarray
    k_rho_inverse: InverseOperator

    @property
    def num_dofs(self):
        return self.load.shape[0]

    @property
    def revision(self):
        return self.problem.revision

    @property
    def inner_mode(self):
        return self.k_rho_inverse.mode

    def coupled_matrix(self) -> sp.csr_matrix:
        """[[K_rho, K], [-K, M]] acting on [p; u]."""
        return sp.bmat([[self.weighted_stiffness, self.stiffness], [-self.stiffness, self.mass]], format='csr')

    def symmetric_matrix(self) -> sp.csr_matrix:
        """[[K_rho, K], [K, -M]] acting on [p; u]."""
        return sp.bmat([[self.weighted_stiffness, self.stiffness], [self.stiffness, -self.mass]], format='csr')

    def coupled_rhs(self):
        return np.concatenate([np.zeros(self.num_dofs), self.load])


def build_system(problem: OcpProblem, inner='cholesky', inner_tol=1e-12) -> DiscreteSystem:
    """Assemble all matrices and prepare K_rho_h^{-1} (factorized or inner PCG)."""
    mesh, dofmap = problem.mesh, problem.dofmap
    dofmap.require_dofs()
    stiffness = assemble_stiffness(mesh, dofmap)
    weighted = assemble_weighted_stiffness(mesh, dofmap, problem.rho)
    mass = assemble_mass(mesh, dofmap)
    load = assemble_load(mesh, dofmap, problem.target, problem.quadrature)
    if not np.all(np.isfinite(load)):
        raise ValueError("load vector is not finite")
    system = DiscreteSystem(problem=problem, stiffness=stiffness, weighted_stiffness=weighted, mass=mass,
                            lumped_mass=lump_mass(mass), diagonal_mass=diag_mass(mass), load=load,
                            k_rho_inverse=InverseOperator(weighted, mode=inner, tol=inner_tol))
    logger.debug("built system {} with {} dofs, rho in [{:.3e}, {:.3e}], inner {}".format(
        problem.revision, system.num_dofs, problem.rho.lower, problem.rho.upper, inner))
    return system


def schur_operator(system: DiscreteSystem) -> spla.LinearOperator:
    """S = M_h + K_h K_rho_h^{-1} K_h, never formed."""
    return schur_complement_operator(system.stiffness, system.k_rho_inverse, system.mass)


def l2_projection(system: DiscreteSystem) -> np.ndarray:
    """Solution of M u = f."""
    return spla.spsolve(sp.csc_matrix(system.mass), system.load)


def energy_norm_operator(system: DiscreteSystem) -> spla.LinearOperator:
    """K_h K_rho_h^{-1} K_h, the discrete variable energy norm of the control."""
    k = as_operator(system.stiffness)
    inv = system.k_rho_inverse
    return spla.LinearOperator(k.shape, matvec=lambda x: k.matvec(inv.matvec(k.matvec(x))), dtype=float)
