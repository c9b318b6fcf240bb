# -*- coding: utf-8 -*-
"""
@description: argument checks shared by the mesh, assembly and solver layers
"""
from numbers import Integral, Real

import numpy as np


def is_pos_int(number) -> bool:
    """
    Returns True if a number is a strictly positive integer.
    """
    return isinstance(number, Integral) and not isinstance(number, bool) and number > 0


def is_pos_float(number) -> bool:
    """
    Returns True if a number is a finite, strictly positive real.
    """
    return isinstance(number, Real) and not isinstance(number, bool) and np.isfinite(number) and number > 0


def is_unit_interval(number) -> bool:
    """
    Returns True if 0 < number <= 1.
    """
    return is_pos_float(number) and number <= 1.0


def check_vector(x, size, name='vector'):
    """Returns x as a 1-D float array of the given size."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != size:
        raise ValueError("{} must have shape ({},), got {}".format(name, size, x.shape))
    return x
