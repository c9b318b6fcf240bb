# -*- coding: utf-8 -*-
"""
@description: command line interface

    ocpfem adapt --dim 2 --levels 14 --theta 0.5 --out output/adapt_2d
    ocpfem solve --dim 3 --levels 1 --solver pcg
    ocpfem compare --dim 1 --levels 20
    ocpfem solvers --dim 3 --levels 4 --dof-budget 200000
    ocpfem export --out output/adapt_2d

Exit codes: 0 success, 1 solver failure or failed run, 2 bad arguments.
"""
import argparse
import os
import sys

from ocpfem.bench.config import get_default_config, load_config, validate_config
from ocpfem.bench.experiment import compare_regularizations, export_run, run_experiment, solver_study
from ocpfem.linalg import NotPositiveDefiniteError
from ocpfem.utils.logger import add_log_file, logger, set_log_level

CLI_SOLVERS = ('cg', 'pcg', 'pcg_diag', 'gmres', 'bpcg', 'direct')


def _add_common(parser):
    parser.add_argument('--config', type=str, default=None, help='yml preset or flat key = value file')
    parser.add_argument('--dim', type=int, choices=(1, 2, 3), default=None, help='space dimension')
    parser.add_argument('--levels', type=int, default=None, help='number of refinement steps')
    parser.add_argument('--theta', type=float, default=None, help='maximum marking parameter in (0, 1]')
    parser.add_argument('--solver', type=str, choices=CLI_SOLVERS, action='append', default=None,
                        help='solver to run, repeat for several; the first one drives refinement')
    parser.add_argument('--target', type=str, default=None, help='target name: box, u1d, u2d, u3d, sine, ...')
    parser.add_argument('--out', type=str, default=None, help='output directory')
    parser.add_argument('--dof-budget', type=int, default=None, help='skip levels above this many dofs')
    parser.add_argument('--vtk', action='store_true', help='write a VTK snapshot per level')
    parser.add_argument('--vectors', action='store_true', help='save u, p, z per level')
    parser.add_argument('--log-level', type=str, default=None, help='DEBUG, INFO, WARNING')
    parser.add_argument('--log-file', type=str, default=None, help='also log to this file')
    parser.add_argument('opts', nargs=argparse.REMAINDER, default=None,
                        help='config overrides as KEY VALUE pairs')


def build_parser():
    parser = argparse.ArgumentParser(prog='ocpfem', description='adaptive FEM for optimal control with '
                                                                'variable energy regularization')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    solve = subparsers.add_parser('solve', help='solve on `levels` levels and report the last one')
    _add_common(solve)
    solve.add_argument('--uniform', action='store_true', help='refine uniformly instead of adaptively')
    adapt = subparsers.add_parser('adapt', help='full adaptive loop')
    _add_common(adapt)
    uniform = subparsers.add_parser('uniform', help='uniform refinement baseline')
    _add_common(uniform)
    uniform.add_argument('--regularization', type=str, choices=('diffusion', 'energy', 'l2'), default=None)
    compare = subparsers.add_parser('compare', help='L2, energy and diffusion regularization curves')
    _add_common(compare)
    solvers = subparsers.add_parser('solvers', help='iteration counts of all solvers per level')
    _add_common(solvers)
    solvers.add_argument('--mode', type=str, choices=('adaptive', 'uniform'), action='append', default=None)
    export = subparsers.add_parser('export', help='rewrite VTK and summary of a finished run')
    export.add_argument('--out', type=str, required=True, help='run directory')
    export.add_argument('--log-level', type=str, default=None)
    export.add_argument('--log-file', type=str, default=None)
    return parser


def config_from_args(args):
    """Defaults, then --config, then trailing KEY VALUE overrides, then flags."""
    config = load_config(args.config) if args.config else get_default_config()
    if args.opts:
        config.merge_from_list(args.opts)
    if args.dim is not None:
        config.EXPERIMENT.DIM = args.dim
    if args.levels is not None:
        config.EXPERIMENT.MAX_LEVELS = args.levels
    if args.theta is not None:
        config.ADAPT.THETA = args.theta
    if args.solver:
        config.SOLVER.NAMES = tuple(args.solver)
    if args.target is not None:
        config.EXPERIMENT.TARGET = args.target
    if args.out is not None:
        config.EXPERIMENT.OUTPUT_DIR = args.out
    if args.dof_budget is not None:
        config.EXPERIMENT.DOF_BUDGET = args.dof_budget
    if args.vtk:
        config.EXPORT.VTK = True
    if args.vectors:
        config.EXPORT.VECTORS = True
    if args.log_level is not None:
        config.LOG.LEVEL = args.log_level
    return config


def _prepare_command(args):
    """
    Validated config of one command, None for export. Everything that can
    be rejected from the arguments alone is rejected here.
    """
    if args.command == 'export':
        if not os.path.isdir(args.out):
            raise ValueError("run directory {} not found".format(args.out))
        return None
    config = config_from_args(args)
    if args.command == 'solve':
        # `levels` counts solved levels here, level L1 is the initial mesh
        levels = max(1, args.levels if args.levels is not None else 1)
        config.EXPERIMENT.MAX_LEVELS = levels - 1
        config.EXPERIMENT.REFINEMENT = 'uniform' if args.uniform else 'adaptive'
        if args.uniform:
            config.EXPERIMENT.REGULARIZATION = 'diffusion'
    elif args.command in ('adapt', 'uniform'):
        config.EXPERIMENT.REFINEMENT = 'adaptive' if args.command == 'adapt' else 'uniform'
        if args.command == 'uniform' and args.regularization:
            config.EXPERIMENT.REGULARIZATION = args.regularization
    elif args.command not in ('compare', 'solvers'):
        raise NotImplementedError("command {} not implemented".format(args.command))
    return validate_config(config)


def _run_command(args, config):
    if args.command == 'export':
        for path in export_run(args.out):
            print(path)
        return 0
    if args.command == 'solve':
        records, summary = run_experiment(config)
        last = records[-1]
        print('level={} N={} dofs={} error={:.6e} its_pcg={} its_cg={} its_gmres={} its_bpcg={}'.format(
            last.level + 1, last.N, last.dofs, last.error, last.its_pcg, last.its_cg, last.its_gmres, last.its_bpcg))
        return 0 if summary['converged'] else 1
    if args.command in ('adapt', 'uniform'):
        _, summary = run_experiment(config)
        for key, value in summary.items():
            print('{}: {}'.format(key, value))
        return 0 if summary['converged'] else 1
    if args.command == 'compare':
        levels = config.EXPERIMENT.MAX_LEVELS if config.EXPERIMENT.MAX_LEVELS >= 0 else None
        table, rates = compare_regularizations(config.EXPERIMENT.DIM, levels, config)
        for curve, rate in rates.items():
            print('{}: rate {:.4f}'.format(curve, rate))
        return 0 if bool(table['converged'].all()) else 1
    tables = solver_study(config, modes=tuple(args.mode or ('adaptive', 'uniform')), dimension=config.EXPERIMENT.DIM)
    ok = True
    for mode, frame in tables.items():
        print(mode)
        print(frame[['level', 'N', 'dofs', 'h_min', 'h_max', 'error', 'its_pcg', 'its_cg', 'its_gmres',
                     'its_bpcg']].to_string(index=False))
        ok = ok and bool(frame['converged'].all())
    return 0 if ok else 1


def cli_main(argv=None):
    """Exit code 2 for arguments rejected before the run, 1 for a failed run."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    try:
        if args.log_level:
            set_log_level(args.log_level)
        if args.log_file:
            add_log_file(args.log_file)
        config = _prepare_command(args)
    except (ValueError, KeyError, AssertionError, NotImplementedError) as err:
        logger.error(str(err))
        return 2
    try:
        return _run_command(args, config)
    except NotPositiveDefiniteError as err:
        logger.error("solver failure: {}".format(err))
        return 1
    except (ValueError, ArithmeticError, RuntimeError) as err:
        logger.error("run failed: {}".format(err))
        return 1


def main():
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
