# -*- coding: utf-8 -*-
"""
@description: initial meshes of (0,1), (0,1)^2 and (0,1)^3
"""
import itertools

import numpy as np

from ocpfem.mesh.simplicial_mesh import SimplicialMesh
from ocpfem.utils.type_utils import is_pos_int

DIAGONALS = ('kuhn', 'alternate')


def build_interval_mesh(num_elements: int) -> SimplicialMesh:
    """Uniform partition of (0,1) into ``num_elements`` segments."""
    if not is_pos_int(num_elements):
        raise ValueError("num_elements must be a positive integer, got {!r}".format(num_elements))
    vertices = np.arange(num_elements + 1, dtype=float) / num_elements
    vertices[-1] = 1.0
    left = np.arange(num_elements)
    elements = np.stack([left, left + 1], axis=1)
    return SimplicialMesh(
        vertices=vertices[:, None],
        elements=elements,
        tags=np.ones(num_elements, dtype=np.int64),
        generation=np.zeros(num_elements, dtype=np.int64),
        metadata={'builder': 'interval', 'divisions': num_elements},
    )


def _lattice_index(shape):
    strides = np.cumprod((1,) + tuple(s + 1 for s in shape[:-1]))

    def index(point):
        return int(np.dot(point, strides))

    return index


def _lattice_vertices(m, dim):
    # x fastest
    axes = [np.arange(m + 1, dtype=float) / m] * dim
    grid = np.meshgrid(*axes, indexing='ij')
    return np.stack([g.ravel(order='F') for g in grid], axis=1)


def build_unit_square_mesh(divisions: int = 4, diagonal: str = 'alternate') -> SimplicialMesh:
    """
    A divisions x divisions grid of squares, each cut into two triangles.

    With the default 4x4 grid this gives 32 triangles and 9 interior vertices.
    ``diagonal='kuhn'`` cuts every square along the same diagonal,
    ``'alternate'`` flips the diagonal in a checkerboard pattern. The diagonal
    is the refinement edge of both triangles of a square.
    """
    if not is_pos_int(divisions):
        raise ValueError("divisions must be a positive integer, got {!r}".format(divisions))
    if diagonal not in DIAGONALS:
        raise ValueError("diagonal must be one of {}, got {!r}".format(DIAGONALS, diagonal))
    vertices = _lattice_vertices(divisions, 2)
    index = _lattice_index((divisions, divisions))
    elements = []
    for j in range(divisions):
        for i in range(divisions):
            c00, c10 = index((i, j)), index((i + 1, j))
            c01, c11 = index((i, j + 1)), index((i + 1, j + 1))
            if diagonal == 'kuhn' or (i + j) % 2 == 0:
                elements.append((c00, c10, c11))
                elements.append((c00, c01, c11))
            else:
                elements.append((c10, c00, c01))
                elements.append((c10, c11, c01))
    num = len(elements)
    return SimplicialMesh(
        vertices=vertices,
        elements=np.array(elements, dtype=np.int64),
        tags=np.full(num, 2, dtype=np.int64),
        generation=np.zeros(num, dtype=np.int64),
        metadata={'builder': 'unit_square', 'divisions': divisions, 'diagonal': diagonal},
    )


def build_unit_cube_mesh(m: int) -> SimplicialMesh:
    """
    An m x m x m grid of cubes, each split into the six Kuhn tetrahedra.

    Every tetrahedron walks from a cube corner along the three axis directions
    in one of the 3! orders; its refinement edge is the main cube diagonal.
    """
    if not is_pos_int(m):
        raise ValueError("m must be a positive integer, got {!r}".format(m))
    vertices = _lattice_vertices(m, 3)
    index = _lattice_index((m, m, m))
    unit = np.eye(3, dtype=np.int64)
    elements = []
    for k in range(m):
        for j in range(m):
            for i in range(m):
                corner = np.array((i, j, k))
                for perm in itertools.permutations(range(3)):
                    path = [corner]
                    for axis in perm:
                        path.append(path[-1] + unit[axis])
                    elements.append(tuple(index(p) for p in path))
    num = len(elements)
    return SimplicialMesh(
        vertices=vertices,
        elements=np.array(elements, dtype=np.int64),
        tags=np.full(num, 3, dtype=np.int64),
        generation=np.zeros(num, dtype=np.int64),
        metadata={'builder': 'unit_cube', 'divisions': m, 'split': 'kuhn'},
    )


def build_reference_simplex(dim: int) -> SimplicialMesh:
    """The unit-corner simplex, tagged for Kuhn-compatible bisection."""
    assert dim in (1, 2, 3), "dim must be 1, 2 or 3"
    # path 0 -> e1 -> e1+e2 -> ... is a Kuhn simplex of the unit cube
    vertices = np.zeros((dim + 1, dim))
    for i in range(1, dim + 1):
        vertices[i, :i] = 1.0
    return SimplicialMesh(
        vertices=vertices,
        elements=np.arange(dim + 1)[None, :],
        tags=np.array([dim]),
        generation=np.zeros(1, dtype=np.int64),
        metadata={'builder': 'reference_simplex'},
    )


def build_initial_mesh(dim: int, cfg=None) -> SimplicialMesh:
    """Benchmark starting mesh of the given dimension."""
    if dim == 1:
        return build_interval_mesh(cfg.MESH.INTERVAL_ELEMENTS if cfg is not None else 4)
    if dim == 2:
        diagonal = cfg.MESH.INITIAL_2D_DIAGONAL if cfg is not None else 'alternate'
        return build_unit_square_mesh(4, diagonal=diagonal)
    if dim == 3:
        return build_unit_cube_mesh(cfg.MESH.CUBE_DIVISIONS if cfg is not None else 4)
    raise ValueError("dim must be 1, 2 or 3, got {!r}".format(dim))
