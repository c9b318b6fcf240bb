# -*- coding: utf-8 -*-
"""
@description: experiment runner, regularization comparison and solver study
"""
import glob
import os

import numpy as np
import pandas as pd

from ocpfem.adaptivity import (DIFFUSION, ENERGY, L2, MarkingRule, adaptive_solve, fit_rate, initial_problem,
                               records_to_frame, reports_to_frame, uniform_solve)
from ocpfem.adaptivity.records import ITERATION_COLUMNS
from ocpfem.assembly import QuadratureSpec
from ocpfem.bench.config import bisections, get_default_config, max_levels, save_config, validate_config
from ocpfem.bench.targets import build_target
from ocpfem.linalg import set_log_period
from ocpfem.mesh import build_initial_mesh
from ocpfem.ocp import SolverSettings, recover_control
from ocpfem.utils.io_utils import load_level, read_csv, save_level, write_csv, write_vtk
from ocpfem.utils.logger import logger, set_log_level

# levels used for the rate in the summary
RATE_WINDOW = 5

STUDY_SOLVERS = ('pcg', 'cg', 'gmres', 'bpcg')
POINT_FIELDS = ('u', 'p', 'z', 'u_bar')


class SnapshotWriter(object):
    """Level callback writing VTK snapshots and/or solution vectors."""

    def __init__(self, output_dir, vtk=True, vectors=False):
        self.output_dir = output_dir
        self.vtk = vtk
        self.vectors = vectors
        self.written = []

    def __call__(self, level, problem, system, solution):
        mesh, dofmap = problem.mesh, problem.dofmap
        z = solution.z
        if z is None and system is not None:
            z = recover_control(system, solution)
        fields = {'u': dofmap.extend(solution.u), 'p': dofmap.extend(solution.p),
                  'u_bar': problem.target(mesh.vertices)}
        if z is not None:
            fields['z'] = dofmap.extend(z)
        if self.vtk:
            path = os.path.join(self.output_dir, 'vtk', 'level_{:03d}.vtk'.format(level))
            write_vtk(path, mesh, point_data=fields, cell_data={'h': mesh.mesh_sizes, 'rho': problem.rho.values})
            self.written.append(path)
        if self.vectors:
            path = os.path.join(self.output_dir, 'vectors', '{}.npz'.format(mesh.revision))
            save_level(path, mesh, level=np.array(level), rho=problem.rho.values, **fields)
            self.written.append(path)


def summarize(frame: pd.DataFrame):
    """Levels, final error, fitted rate and max iterations per solver."""
    summary = {
        'levels': int(len(frame)),
        'final_dofs': int(frame['dofs'].iloc[-1]) if len(frame) else 0,
        'final_error': float(frame['error'].iloc[-1]) if len(frame) else float('nan'),
        'converged': bool(frame['converged'].all()) if len(frame) else False,
    }
    try:
        summary['rate'] = fit_rate(frame, window=min(RATE_WINDOW, len(frame)))
    except ValueError:
        summary['rate'] = float('nan')
    for name, column in ITERATION_COLUMNS.items():
        its = frame[column][frame[column] >= 0]
        if len(its):
            summary['max_' + column] = int(its.max())
    return summary


def write_summary(path, summary):
    with open(path, 'w', encoding='utf-8') as f:
        for key, value in summary.items():
            f.write('{}: {}\n'.format(key, value))
    return path


def _prepare(config):
    config = validate_config(config if config is not None else get_default_config())
    set_log_level(config.LOG.LEVEL)
    set_log_period(config.LOG.PERIOD)
    dim = config.EXPERIMENT.DIM
    mesh = build_initial_mesh(dim, config)
    target = build_target(config.EXPERIMENT.TARGET, dim)
    return config, mesh, target, QuadratureSpec.from_config(config), SolverSettings.from_config(config)


def _run(config, mesh, target, quadrature, settings, refinement, regularization, callback=None, levels=None):
    problem = initial_problem(mesh, target, regularization, quadrature)
    levels = max_levels(config) if levels is None else levels
    if refinement == 'adaptive':
        return adaptive_solve(problem, MarkingRule(config.ADAPT.THETA), levels, settings,
                              dof_budget=config.EXPERIMENT.DOF_BUDGET,
                              abort_on_failure=config.ADAPT.ABORT_ON_FAILURE, callback=callback,
                              bisections=bisections(config))
    return uniform_solve(problem, levels, settings, regularization, dof_budget=config.EXPERIMENT.DOF_BUDGET,
                         abort_on_failure=config.ADAPT.ABORT_ON_FAILURE, callback=callback)


def run_experiment(config=None):
    """
    One refinement run as configured.

    Writes levels.csv, solvers.csv (one SolverReport row per level and
    solver), summary.txt and config.txt (plus snapshots when enabled) to
    EXPERIMENT.OUTPUT_DIR and returns (records, summary).
    """
    config, mesh, target, quadrature, settings = _prepare(config)
    out = config.EXPERIMENT.OUTPUT_DIR
    callback = None
    if config.EXPORT.VTK or config.EXPORT.VECTORS:
        callback = SnapshotWriter(out, vtk=config.EXPORT.VTK, vectors=config.EXPORT.VECTORS)
    logger.info("run {} {}D, target {}, regularization {}, solvers {}".format(
        config.EXPERIMENT.REFINEMENT, config.EXPERIMENT.DIM, config.EXPERIMENT.TARGET,
        config.EXPERIMENT.REGULARIZATION, ','.join(settings.names)))
    records = _run(config, mesh, target, quadrature, settings, config.EXPERIMENT.REFINEMENT,
                   config.EXPERIMENT.REGULARIZATION, callback)
    frame = records_to_frame(records)
    summary = summarize(frame)
    write_csv(os.path.join(out, 'levels.csv'), frame)
    write_csv(os.path.join(out, 'solvers.csv'), reports_to_frame(records))
    write_summary(os.path.join(out, 'summary.txt'), summary)
    save_config(config, os.path.join(out, 'config.txt'))
    logger.info("finished {} levels, error {:.5e}, rate {:.3f}".format(
        summary['levels'], summary['final_error'], summary['rate']))
    return records, summary


def compare_regularizations(dimension, levels=None, config=None):
    """
    L2 (rho = h^4, uniform), energy (rho = h^2, uniform) and diffusion
    (rho_l = h_l^2, adaptive) curves in one table; returns (frame, rates).
    """
    config = (config if config is not None else get_default_config()).clone()
    config.EXPERIMENT.DIM = dimension
    config, mesh, target, quadrature, settings = _prepare(config)
    curves = (('l2_uniform', 'uniform', L2), ('energy_uniform', 'uniform', ENERGY),
              ('diffusion_adaptive', 'adaptive', DIFFUSION))
    frames, rates = [], {}
    for curve, refinement, regularization in curves:
        records = _run(config, mesh, target, quadrature, settings, refinement, regularization, levels=levels)
        frame = records_to_frame(records)
        frame.insert(0, 'curve', curve)
        frames.append(frame)
        try:
            rates[curve] = fit_rate(frame, window=min(RATE_WINDOW, len(frame)))
        except ValueError:
            rates[curve] = float('nan')
        logger.info("{}: {} levels, rate {:.3f}".format(curve, len(frame), rates[curve]))
    table = pd.concat(frames, ignore_index=True)
    out = config.EXPERIMENT.OUTPUT_DIR
    write_csv(os.path.join(out, 'compare.csv'), table)
    write_summary(os.path.join(out, 'compare_summary.txt'), {'rate_' + k: v for k, v in rates.items()})
    return table, rates


def solver_study(config=None, modes=('adaptive', 'uniform'), dimension=3):
    """Iteration counts of pcg, cg, gmres and bpcg per level, one table per refinement mode."""
    config = (config if config is not None else get_default_config()).clone()
    config.EXPERIMENT.DIM = dimension
    config.EXPERIMENT.REGULARIZATION = DIFFUSION
    config.SOLVER.NAMES = STUDY_SOLVERS
    config, mesh, target, quadrature, settings = _prepare(config)
    tables = {}
    for mode in modes:
        if mode not in ('adaptive', 'uniform'):
            raise ValueError("unknown refinement mode {!r}".format(mode))
        records = _run(config, mesh, target, quadrature, settings, mode, DIFFUSION)
        frame = records_to_frame(records)
        write_csv(os.path.join(config.EXPERIMENT.OUTPUT_DIR, 'solvers_{}.csv'.format(mode)), frame)
        tables[mode] = frame
    return tables


def export_run(run_dir):
    """Rewrite VTK snapshots from saved vectors and the summary from levels.csv."""
    written = []
    for path in sorted(glob.glob(os.path.join(run_dir, 'vectors', '*.npz'))):
        mesh, vectors = load_level(path)
        point_data = {k: v for k, v in vectors.items() if k in POINT_FIELDS}
        cell_data = {k: v for k, v in vectors.items() if k == 'rho'}
        cell_data['h'] = mesh.mesh_sizes
        level = int(vectors['level']) if 'level' in vectors else len(written)
        written.append(write_vtk(os.path.join(run_dir, 'vtk', 'level_{:03d}.vtk'.format(level)), mesh,
                                 point_data=point_data, cell_data=cell_data))
    levels_csv = os.path.join(run_dir, 'levels.csv')
    if os.path.exists(levels_csv):
        written.append(write_summary(os.path.join(run_dir, 'summary.txt'), summarize(read_csv(levels_csv))))
    if not written:
        raise ValueError("nothing to export in {}".format(run_dir))
    return written
