# -*- coding: utf-8 -*-
"""
@description: 
"""
