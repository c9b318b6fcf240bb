# -*- coding: utf-8 -*-
"""
@description: named desired states of the benchmarks
"""
from ocpfem.assembly import BoxIndicator, linear_target, sine_product, zero_target

TARGET_REGISTRY = {}

# the box (0.25, 0.75)^n of the benchmark targets
BOX_LOWER = 0.25
BOX_UPPER = 0.75


def register_target(name, dims=(1, 2, 3)):
    """Registers a target factory `factory(dim) -> TargetFunction` under `name`."""

    def register_target_fn(fn):
        if name in TARGET_REGISTRY:
            raise ValueError("Cannot register duplicate target ({})".format(name))
        TARGET_REGISTRY[name] = (fn, tuple(dims))
        return fn

    return register_target_fn


def build_target(name, dim):
    if name not in TARGET_REGISTRY:
        raise NotImplementedError("target {} not implemented, known: {}".format(name, sorted(TARGET_REGISTRY)))
    factory, dims = TARGET_REGISTRY[name]
    if dim not in dims:
        raise ValueError("target {} is defined for dimensions {}, not {}".format(name, dims, dim))
    return factory(dim)


def benchmark_box(dim):
    return BoxIndicator((BOX_LOWER,) * dim, (BOX_UPPER,) * dim)


@register_target("box")
def _box(dim):
    return benchmark_box(dim)


@register_target("u1d", dims=(1,))
def _u1d(dim):
    return benchmark_box(1)


@register_target("u2d", dims=(2,))
def _u2d(dim):
    return benchmark_box(2)


@register_target("u3d", dims=(3,))
def _u3d(dim):
    return benchmark_box(3)


@register_target("sine")
def _sine(dim):
    return sine_product(dim)


@register_target("linear")
def _linear(dim):
    return linear_target([1.0] * dim, 0.0)


@register_target("zero")
def _zero(dim):
    return zero_target()
