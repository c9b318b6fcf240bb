# -*- coding: utf-8 -*-
"""
@description: adaptive finite elements for optimal control with variable energy regularization
"""

__version__ = '0.1.0'
