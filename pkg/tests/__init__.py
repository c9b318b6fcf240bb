# -*- coding: utf-8 -*-
"""
@description: ocpfem test suite
"""
