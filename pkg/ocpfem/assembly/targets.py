# -*- coding: utf-8 -*-
"""
@description: desired states for the tracking functional
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class TargetFunction(object):
    """Base class of desired states u_bar evaluated at points of shape (..., n)."""

    def __call__(self, x):
        raise NotImplementedError

    def scaled(self, alpha):
        raise NotImplementedError


@dataclass(frozen=True)
class BoxIndicator(TargetFunction):
    """``amplitude`` on the open box (lower, upper), 0 elsewhere."""
    lower: tuple
    upper: tuple
    amplitude: float = 1.0

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lower) != len(upper):
            raise ValueError("box corners must have the same dimension")
        if not all(0.0 <= lo < up <= 1.0 for lo, up in zip(lower, upper)):
            raise ValueError("box corners must satisfy 0 <= lower < upper <= 1, got {} {}".format(lower, upper))
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @property
    def dim(self):
        return len(self.lower)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.all((x > np.array(self.lower)) & (x < np.array(self.upper)), axis=-1)
        return self.amplitude * inside.astype(float)

    def scaled(self, alpha):
        return BoxIndicator(self.lower, self.upper, self.amplitude * alpha)

    @property
    def l2_norm(self):
        return abs(self.amplitude) * float(np.sqrt(np.prod(np.subtract(self.upper, self.lower))))

    def classify(self, coords):
        """
        Split elements into inside / outside / straddling the box.

        coords: (N, n+1, n) vertex coordinates.
        """
        lower = np.array(self.lower)
        upper = np.array(self.upper)
        inside = np.all((coords >= lower) & (coords <= upper), axis=(1, 2))
        outside = np.any(np.all(coords <= lower, axis=1) | np.all(coords >= upper, axis=1), axis=1)
        straddling = ~(inside | outside)
        return inside, outside, straddling


@dataclass(frozen=True)
class Smooth(TargetFunction):
    """A smooth desired state with optional exact gradient."""
    func: Callable
    grad: Optional[Callable] = None
    name: str = 'smooth'

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def gradient(self, x):
        if self.grad is None:
            raise ValueError("target {!r} has no gradient".format(self.name))
        return np.asarray(self.grad(np.asarray(x, dtype=float)), dtype=float)

    def scaled(self, alpha):
        grad = None if self.grad is None else (lambda x: alpha * self.grad(x))
        return Smooth(lambda x: alpha * self.func(x), grad, '{}*{}'.format(alpha, self.name))


def zero_target():
    return Smooth(lambda x: np.zeros(x.shape[:-1]), lambda x: np.zeros(x.shape), 'zero')


def sine_product(dim):
    """sin(pi x_1) ... sin(pi x_n), vanishing on the boundary."""

    def func(x):
        return np.prod(np.sin(np.pi * x), axis=-1)

    def grad(x):
        s = np.sin(np.pi * x)
        c = np.cos(np.pi * x)
        out = np.empty(x.shape)
        for d in range(dim):
            others = np.prod(np.delete(s, d, axis=-1), axis=-1) if dim > 1 else 1.0
            out[..., d] = np.pi * c[..., d] * others
        return out

    return Smooth(func, grad, 'sine_product_{}d'.format(dim))


def linear_target(coefficients, offset=0.0):
    """x -> offset + c.x, reproduced exactly by P1 functions."""
    c = np.asarray(coefficients, dtype=float)
    return Smooth(lambda x: offset + x @ c, lambda x: np.broadcast_to(c, x.shape).copy(), 'linear')
