# -*- coding: utf-8 -*-
"""
@description: conforming simplicial meshes of the unit interval, square and cube

Element vertex order is the bisection order: the refinement edge of element
``l`` joins ``elements[l, 0]`` and ``elements[l, tags[l]]``. Volumes are
unsigned, since bisection children alternate orientation.
"""
import hashlib
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict

import numpy as np


@dataclass(frozen=True)
class ElementGeometry:
    element_index: int
    volume: float
    local_mesh_size: float
    vertices: np.ndarray


@dataclass(frozen=True, eq=False)
class SimplicialMesh:
    """
    Immutable simplicial triangulation of (0,1)^n.

    Args:
        vertices: (num_vertices, n) coordinates in [0,1]^n
        elements: (num_elements, n+1) vertex indices in bisection order
        tags: per-element index k of the refinement edge (elements[:, 0], elements[:, k])
        generation: number of bisections separating each element from the initial mesh
        metadata: construction notes (builder name, diagonal choice, ...)
    """
    vertices: np.ndarray
    elements: np.ndarray
    tags: np.ndarray
    generation: np.ndarray
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        vertices = np.ascontiguousarray(self.vertices, dtype=float)
        if vertices.ndim == 1:
            vertices = vertices[:, None]
        elements = np.ascontiguousarray(self.elements, dtype=np.int64)
        tags = np.ascontiguousarray(self.tags, dtype=np.int64)
        generation = np.ascontiguousarray(self.generation, dtype=np.int64)
        dim = vertices.shape[1]
        assert dim in (1, 2, 3), "only 1D, 2D and 3D meshes are supported"
        assert elements.ndim == 2 and elements.shape[1] == dim + 1, "elements must be (N, n+1)"
        assert tags.shape == (elements.shape[0],), "one refinement tag per element"
        assert generation.shape == (elements.shape[0],), "one generation per element"
        for name, arr in (('vertices', vertices), ('elements', elements), ('tags', tags),
                          ('generation', generation)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @cached_property
    def boundary_vertex_flags(self) -> np.ndarray:
        """True for vertices on the boundary of the unit cube."""
        flags = np.any((self.vertices == 0.0) | (self.vertices == 1.0), axis=1)
        flags.setflags(write=False)
        return flags

    @property
    def interior_vertex_count(self) -> int:
        return int(np.count_nonzero(~self.boundary_vertex_flags))

    @property
    def vertex_count(self) -> int:
        return self.num_vertices

    @cached_property
    def refinement_edges(self) -> np.ndarray:
        """(N, 2) vertex pairs of the designated bisection edges."""
        rows = np.arange(self.num_elements)
        edges = np.stack([self.elements[:, 0], self.elements[rows, self.tags]], axis=1)
        edges.setflags(write=False)
        return edges

    @cached_property
    def revision(self) -> str:
        """Content hash identifying this mesh generation."""
        sha = hashlib.sha1()
        sha.update(self.vertices.tobytes())
        sha.update(self.elements.tobytes())
        return sha.hexdigest()[:12]

    @cached_property
    def volumes(self) -> np.ndarray:
        """Element volumes from the determinant formula."""
        coords = self.vertices[self.elements]
        edges = coords[:, 1:, :] - coords[:, :1, :]
        if self.dim == 1:
            det = edges[:, 0, 0]
        else:
            det = np.linalg.det(edges)
        vol = np.abs(det) / math.factorial(self.dim)
        vol.setflags(write=False)
        return vol

    @cached_property
    def mesh_sizes(self) -> np.ndarray:
        """Local mesh sizes h_l = volume ** (1/n)."""
        if self.dim == 1:
            h = self.volumes.copy()
        elif self.dim == 2:
            h = np.sqrt(self.volumes)
        else:
            h = np.cbrt(self.volumes)
        h.setflags(write=False)
        return h

    @property
    def h_min(self) -> float:
        return float(self.mesh_sizes.min())

    @property
    def h_max(self) -> float:
        return float(self.mesh_sizes.max())

    def element_geometry(self, index) -> ElementGeometry:
        return element_geometry(self, index)

    def __repr__(self):
        return "SimplicialMesh(dim={}, elements={}, vertices={}, revision={})".format(
            self.dim, self.num_elements, self.num_vertices, self.revision)


def element_geometry(mesh: SimplicialMesh, index) -> ElementGeometry:
    """Volume, local mesh size and coordinates of element ``index``."""
    if not 0 <= index < mesh.num_elements:
        raise IndexError("element index {} out of range [0, {})".format(index, mesh.num_elements))
    return ElementGeometry(
        element_index=int(index),
        volume=float(mesh.volumes[index]),
        local_mesh_size=float(mesh.mesh_sizes[index]),
        vertices=mesh.vertices[mesh.elements[index]].copy(),
    )


def _facets(elements):
    """All (n)-vertex facets of every element, vertex indices sorted."""
    n1 = elements.shape[1]
    facets = [np.sort(elements[:, list(cols)], axis=1) for cols in itertools.combinations(range(n1), n1 - 1)]
    return np.concatenate(facets, axis=0)


def is_conforming(mesh: SimplicialMesh, rtol=1e-10) -> bool:
    """
    Facet-matching conformity test.

    Every facet is shared by exactly two elements or lies on the boundary,
    and the element volumes tile the unit cube.
    """
    if np.any(mesh.volumes <= 0.0):
        return False
    if abs(mesh.volumes.sum() - 1.0) > rtol:
        return False
    facets = _facets(mesh.elements)
    unique, counts = np.unique(facets, axis=0, return_counts=True)
    if np.any(counts > 2):
        return False
    lonely = unique[counts == 1]
    if lonely.size == 0:
        return True
    coords = mesh.vertices[lonely]
    on_face = np.any(np.all(coords == 0.0, axis=1) | np.all(coords == 1.0, axis=1), axis=1)
    return bool(np.all(on_face))


def min_angle(mesh: SimplicialMesh) -> float:
    """Smallest interior angle (radians) over all triangles."""
    assert mesh.dim == 2, "min_angle is defined for triangle meshes"
    coords = mesh.vertices[mesh.elements]
    angles = []
    for i in range(3):
        a = coords[:, (i + 1) % 3] - coords[:, i]
        b = coords[:, (i + 2) % 3] - coords[:, i]
        cos = np.einsum('ij,ij->i', a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        angles.append(np.arccos(np.clip(cos, -1.0, 1.0)))
    return float(np.min(angles))


def shape_quality(mesh: SimplicialMesh) -> np.ndarray:
    """
    Inradius over longest edge, normalized to 1 for the regular simplex.
    """
    n = mesh.dim
    coords = mesh.vertices[mesh.elements]
    longest = np.zeros(mesh.num_elements)
    for i, j in itertools.combinations(range(n + 1), 2):
        longest = np.maximum(longest, np.linalg.norm(coords[:, i] - coords[:, j], axis=1))
    if n == 1:
        return np.ones(mesh.num_elements)
    # facet measures
    surface = np.zeros(mesh.num_elements)
    for cols in itertools.combinations(range(n + 1), n):
        pts = coords[:, list(cols)]
        edges = pts[:, 1:] - pts[:, :1]
        gram = np.einsum('eik,ejk->eij', edges, edges)
        surface += np.sqrt(np.abs(np.linalg.det(gram))) / math.factorial(n - 1)
    inradius = n * mesh.volumes / surface
    # regular simplex with unit edge
    regular = 1.0 / math.sqrt(2.0 * n * (n + 1))
    return inradius / longest / regular
