# -*- coding: utf-8 -*-
"""
@description: error indicators, maximum marking and the refinement loops
"""
from ocpfem.adaptivity.loop import (DEFAULT_MAX_LEVELS, DIFFUSION, ENERGY, L2, REGULARIZATIONS, adaptive_solve,
                                    initial_problem, uniform_solve)
from ocpfem.adaptivity.marking import MarkingRule, compute_indicators, mark
from ocpfem.adaptivity.records import CSV_COLUMNS, RunRecord, fit_rate, records_to_frame, reports_to_frame
