# -*- coding: utf-8 -*-
"""
@description: default experiment configuration
"""

from .defaults import _C as cfg
