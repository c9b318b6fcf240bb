# -*- coding: utf-8 -*-
"""
@description: newest-vertex bisection with conforming closure

Tagged bisection: an element (x0, ..., xn) with tag k is cut through the
midpoint z of edge (x0, xk) into

    (x0, ..., x_{k-1}, z, x_{k+1}, ..., xn)
    (x1, ..., xk,      z, x_{k+1}, ..., xn)

both tagged k-1 (n after 1). In 2D this is newest-vertex bisection. Closure
repeatedly bisects every element that has a hanging midpoint on one of its
edges until none is left.
"""
import itertools

import numpy as np

from ocpfem.mesh.simplicial_mesh import SimplicialMesh
from ocpfem.utils.logger import logger
from ocpfem.utils.type_utils import is_pos_int

_KEY_SHIFT = np.int64(32)


def _edge_keys(a, b):
    lo = np.minimum(a, b).astype(np.int64)
    hi = np.maximum(a, b).astype(np.int64)
    return (lo << _KEY_SHIFT) | hi


class _Bisector(object):
    """Mutable working state of one refine call."""

    def __init__(self, mesh: SimplicialMesh):
        self.dim = mesh.dim
        self.base = mesh.vertices
        self.new_coords = []
        self.num_vertices = mesh.num_vertices
        self.elements = mesh.elements.copy()
        self.tags = mesh.tags.copy()
        self.generation = mesh.generation.copy()
        # generation each element must reach, -1 outside the marked set
        self.goal = np.full(mesh.num_elements, -1, dtype=np.int64)
        self.midpoints = {}
        self._edge_columns = list(itertools.combinations(range(self.dim + 1), 2))

    def _vertex(self, index):
        if index < self.base.shape[0]:
            return self.base[index]
        return self.new_coords[index - self.base.shape[0]]

    def _midpoint_indices(self, a, b):
        keys = _edge_keys(a, b)
        out = np.empty(keys.shape[0], dtype=np.int64)
        for i, (key, va, vb) in enumerate(zip(keys.tolist(), a.tolist(), b.tolist())):
            z = self.midpoints.get(key)
            if z is None:
                z = self.num_vertices
                self.num_vertices += 1
                self.midpoints[key] = z
                self.new_coords.append(0.5 * (self._vertex(va) + self._vertex(vb)))
            out[i] = z
        return out

    def bisect(self, index):
        """Bisect the elements ``index`` once each."""
        n = self.dim
        parents = self.elements[index]
        k = self.tags[index]
        rows = np.arange(index.shape[0])
        z = self._midpoint_indices(parents[:, 0], parents[rows, k])

        first = parents.copy()
        first[rows, k] = z
        second = np.empty_like(parents)
        for kk in range(1, n + 1):
            sel = k == kk
            if not np.any(sel):
                continue
            block = parents[sel]
            second[sel, :kk] = block[:, 1:kk + 1]
            second[sel, kk] = z[sel]
            second[sel, kk + 1:] = block[:, kk + 1:]
        if n == 1:
            second = second[:, ::-1]
        new_tags = np.where(k > 1, k - 1, n)
        new_generation = self.generation[index] + 1

        self.elements[index] = first
        self.tags[index] = new_tags
        self.generation[index] = new_generation
        self.elements = np.concatenate([self.elements, second])
        self.tags = np.concatenate([self.tags, new_tags])
        self.generation = np.concatenate([self.generation, new_generation])
        self.goal = np.concatenate([self.goal, self.goal[index]])

    def hanging(self):
        """Indices of elements with a bisected edge."""
        if not self.midpoints:
            return np.empty(0, dtype=np.int64)
        split = np.fromiter(self.midpoints.keys(), dtype=np.int64, count=len(self.midpoints))
        flags = np.zeros(self.elements.shape[0], dtype=bool)
        for i, j in self._edge_columns:
            keys = _edge_keys(self.elements[:, i], self.elements[:, j])
            flags |= np.isin(keys, split)
        return np.flatnonzero(flags)

    def mesh(self, parent: SimplicialMesh) -> SimplicialMesh:
        metadata = dict(parent.metadata)
        metadata['parent_revision'] = parent.revision
        return SimplicialMesh(
            vertices=np.concatenate([self.base, np.reshape(self.new_coords, (-1, self.dim))], axis=0),
            elements=self.elements,
            tags=self.tags,
            generation=self.generation,
            metadata=metadata,
        )


def refine(mesh: SimplicialMesh, marked, bisections=1) -> SimplicialMesh:
    """
    Bisect every marked element at least `bisections` times and close the
    mesh conformingly.

    With bisections = n every marked element is replaced by 2^n children
    (or more through closure), which halves its h_l. Unrefined elements
    keep their index, the first child of a bisected element takes its
    parent's index and second children are appended.
    """
    marked = np.unique(np.fromiter((int(i) for i in marked), dtype=np.int64))
    if marked.size == 0:
        return mesh
    if marked[0] < 0 or marked[-1] >= mesh.num_elements:
        raise IndexError("marked element indices must lie in [0, {})".format(mesh.num_elements))
    if not is_pos_int(bisections):
        raise ValueError("bisections must be a positive integer, got {!r}".format(bisections))
    work = _Bisector(mesh)
    work.goal[marked] = work.generation[marked] + bisections
    todo = marked
    sweeps = 0
    while todo.size:
        while todo.size:
            work.bisect(todo)
            todo = work.hanging()
            sweeps += 1
        todo = np.flatnonzero(work.generation < work.goal)
    refined = work.mesh(mesh)
    logger.debug("refine: {} marked, {} -> {} elements in {} sweeps".format(
        marked.size, mesh.num_elements, refined.num_elements, sweeps))
    return refined


def uniform_refine(mesh: SimplicialMesh) -> SimplicialMesh:
    """n rounds of bisection of all elements, halving every h_l."""
    for _ in range(mesh.dim):
        mesh = refine(mesh, range(mesh.num_elements))
    return mesh
