# -*- coding: utf-8 -*-
"""
@description: load vectors and elementwise L2 errors against a target

For every element we need the moments

    m1_j = int_tau u_bar * lambda_j      (one per element vertex)
    m2   = int_tau u_bar^2

Box indicators are integrated exactly on elements inside or outside the box
and by the composite midpoint rule on straddling elements; smooth targets use
the composite degree-2 rule everywhere.
"""
import numpy as np

from ocpfem.assembly.dofmap import DofMap
from ocpfem.assembly.matrices import element_mass_coefficient
from ocpfem.assembly.quadrature import QuadratureSpec
from ocpfem.assembly.regularization import RegularizationField
from ocpfem.assembly.targets import BoxIndicator, Smooth, TargetFunction
from ocpfem.mesh.simplicial_mesh import SimplicialMesh

# points per chunk when evaluating targets at quadrature points
_CHUNK_POINTS = 2 ** 21


def _rule_moments(coords, volumes, target, points, weights):
    """Moments by quadrature on the given elements."""
    num = coords.shape[0]
    n1 = coords.shape[1]
    m1 = np.zeros((num, n1))
    m2 = np.zeros(num)
    step = max(1, _CHUNK_POINTS // points.shape[0])
    for start in range(0, num, step):
        stop = min(num, start + step)
        x = np.einsum('qi,eid->eqd', points, coords[start:stop])
        values = target(x)
        m1[start:stop] = np.einsum('q,eq,qi->ei', weights, values, points)
        m2[start:stop] = np.einsum('q,eq->e', weights, values ** 2)
    m1 *= volumes[:, None]
    m2 *= volumes
    return m1, m2


def target_moments(mesh: SimplicialMesh, target: TargetFunction, quadrature: QuadratureSpec = None):
    """(m1, m2) of the target on every element."""
    quadrature = quadrature or QuadratureSpec()
    coords = mesh.vertices[mesh.elements]
    volumes = mesh.volumes
    n1 = mesh.dim + 1
    if isinstance(target, BoxIndicator):
        if target.dim != mesh.dim:
            raise ValueError("box of dimension {} on a {}D mesh".format(target.dim, mesh.dim))
        inside, _, straddling = target.classify(coords)
        m1 = np.zeros((mesh.num_elements, n1))
        m2 = np.zeros(mesh.num_elements)
        m1[inside] = (target.amplitude * volumes[inside] / n1)[:, None]
        m2[inside] = target.amplitude ** 2 * volumes[inside]
        if np.any(straddling):
            points, weights = quadrature.discontinuous_rule(mesh.dim)
            m1[straddling], m2[straddling] = _rule_moments(
                coords[straddling], volumes[straddling], target, points, weights)
        return m1, m2
    points, weights = quadrature.smooth_rule(mesh.dim)
    return _rule_moments(coords, volumes, target, points, weights)


def assemble_load(mesh: SimplicialMesh, dofmap: DofMap, target: TargetFunction,
                  quadrature: QuadratureSpec = None) -> np.ndarray:
    """f_j = int u_bar phi_j over interior dofs."""
    m1, _ = target_moments(mesh, target, quadrature)
    full = np.bincount(mesh.elements.ravel(), weights=m1.ravel(), minlength=mesh.num_vertices)
    return dofmap.restrict(full)


def element_l2_errors_sq(mesh: SimplicialMesh, dofmap: DofMap, coeffs, target: TargetFunction,
                         quadrature: QuadratureSpec = None, moments=None) -> np.ndarray:
    """
    eta_l^2 = int u^2 - 2 int u u_bar + int u_bar^2 on every element.

    The first term uses the exact element mass matrix.
    """
    u = dofmap.extend(coeffs)[mesh.elements]
    m1, m2 = moments if moments is not None else target_moments(mesh, target, quadrature)
    mass_term = element_mass_coefficient(mesh.dim) * mesh.volumes * (u.sum(axis=1) ** 2 + (u ** 2).sum(axis=1))
    cross = np.einsum('ei,ei->e', m1, u)
    return np.maximum(mass_term - 2.0 * cross + m2, 0.0)


def element_l2_error_sq(mesh: SimplicialMesh, dofmap: DofMap, index, coeffs, target: TargetFunction,
                        quadrature: QuadratureSpec = None) -> float:
    """eta_l^2 of a single element."""
    if not 0 <= index < mesh.num_elements:
        raise IndexError("element index {} out of range".format(index))
    return float(element_l2_errors_sq(mesh, dofmap, coeffs, target, quadrature)[index])


def global_l2_error(mesh: SimplicialMesh, dofmap: DofMap, coeffs, target: TargetFunction,
                    quadrature: QuadratureSpec = None) -> float:
    """||u - u_bar||_L2 as the root of the summed element contributions."""
    return float(np.sqrt(element_l2_errors_sq(mesh, dofmap, coeffs, target, quadrature).sum()))


def regularization_energy(mesh: SimplicialMesh, rho: RegularizationField, target: Smooth,
                          quadrature: QuadratureSpec = None) -> float:
    """sum_l rho_l ||grad u_bar||^2_L2(tau_l), the bound of the final error estimate."""
    if not isinstance(target, Smooth):
        raise ValueError("regularization energy needs a smooth target with gradient")
    quadrature = quadrature or QuadratureSpec()
    points, weights = quadrature.smooth_rule(mesh.dim)
    coords = mesh.vertices[mesh.elements]
    x = np.einsum('qi,eid->eqd', points, coords)
    grad_sq = (target.gradient(x) ** 2).sum(axis=-1)
    per_element = mesh.volumes * np.einsum('q,eq->e', weights, grad_sq)
    return float(np.dot(rho.values, per_element))
