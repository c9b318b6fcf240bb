# -*- coding: utf-8 -*-
"""
@description: benchmark targets, experiment runs and the command line
"""
from ocpfem.bench.config import (get_default_config, load_config, parse_config, save_config, serialize_config,
                                 validate_config)
from ocpfem.bench.experiment import (SnapshotWriter, compare_regularizations, export_run, run_experiment,
                                     solver_study, summarize)
from ocpfem.bench.targets import TARGET_REGISTRY, benchmark_box, build_target, register_target
