# -*- coding: utf-8 -*-
"""
@description: python -m ocpfem
"""
from ocpfem.bench.cli import main

if __name__ == '__main__':
    main()
