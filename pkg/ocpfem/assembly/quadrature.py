# -*- coding: utf-8 -*-
"""
@description: composite simplex quadrature by repeated bisection

A rule is a set of barycentric points on the reference simplex with weights
summing to one; integrals on an element are volume * sum(w * f(points)).
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ocpfem.mesh.builders import build_reference_simplex
from ocpfem.mesh.refinement import uniform_refine

# degree-2 rules in barycentric coordinates
_A3, _B3 = 0.5854101966249685, 0.1381966011250105
_DEGREE2 = {
    1: np.array([[0.5 + 0.5 / np.sqrt(3.0), 0.5 - 0.5 / np.sqrt(3.0)],
                 [0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)]]),
    2: np.array([[2. / 3, 1. / 6, 1. / 6],
                 [1. / 6, 2. / 3, 1. / 6],
                 [1. / 6, 1. / 6, 2. / 3]]),
    3: np.array([[_A3, _B3, _B3, _B3],
                 [_B3, _A3, _B3, _B3],
                 [_B3, _B3, _A3, _B3],
                 [_B3, _B3, _B3, _A3]]),
}


@dataclass(frozen=True)
class QuadratureSpec:
    """
    depth: bisection depth d for elements cut by a discontinuity
        (2^(n d) midpoint sub-simplices, capped by max_points)
    smooth_depth: depth of the composite degree-2 rule for smooth targets
    """
    depth: int = 6
    max_points: int = 4096
    smooth_depth: int = 1

    def __post_init__(self):
        if self.depth < 0 or self.smooth_depth < 0:
            raise ValueError("quadrature depths must be >= 0")
        if self.max_points < 1:
            raise ValueError("max_points must be positive")

    def effective_depth(self, dim):
        depth = self.depth
        while depth > 0 and 2 ** (dim * depth) > self.max_points:
            depth -= 1
        return depth

    def discontinuous_rule(self, dim):
        return midpoint_rule(dim, self.effective_depth(dim))

    def smooth_rule(self, dim):
        return degree2_rule(dim, self.smooth_depth)

    @classmethod
    def from_config(cls, cfg):
        return cls(depth=cfg.QUADRATURE.DEPTH, max_points=cfg.QUADRATURE.MAX_POINTS,
                   smooth_depth=cfg.QUADRATURE.SMOOTH_DEPTH)


def _sub_simplices(dim, depth):
    mesh = build_reference_simplex(dim)
    for _ in range(depth):
        mesh = uniform_refine(mesh)
    ref = build_reference_simplex(dim).vertices
    # barycentric coordinates of every sub-simplex vertex
    lhs = np.vstack([ref.T, np.ones(dim + 1)])
    coords = mesh.vertices[mesh.elements]
    rhs = np.concatenate([coords, np.ones(coords.shape[:2] + (1,))], axis=2)
    bary = np.linalg.solve(lhs, rhs.reshape(-1, dim + 1).T).T.reshape(coords.shape[0], dim + 1, dim + 1)
    weights = mesh.volumes / mesh.volumes.sum()
    return bary, weights


@lru_cache(maxsize=None)
def midpoint_rule(dim, depth):
    """Barycenters of the 2^(n depth) bisection sub-simplices, equal weights."""
    bary, weights = _sub_simplices(dim, depth)
    points = bary.mean(axis=1)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


@lru_cache(maxsize=None)
def degree2_rule(dim, depth):
    """Degree-2 rule on every bisection sub-simplex."""
    bary, weights = _sub_simplices(dim, depth)
    local = _DEGREE2[dim]
    points = np.einsum('qi,sij->sqj', local, bary).reshape(-1, dim + 1)
    w = np.repeat(weights, local.shape[0]) / local.shape[0]
    points.setflags(write=False)
    w.setflags(write=False)
    return points, w
