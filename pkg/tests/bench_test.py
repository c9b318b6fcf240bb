# -*- coding: utf-8 -*-
"""
@description: configuration files, target registry, experiment runners and the command line
"""
import os

import numpy as np
import pandas as pd
import pytest

import ocpfem.configs
from ocpfem.adaptivity import DEFAULT_MAX_LEVELS
from ocpfem.bench.cli import build_parser, cli_main, config_from_args
from ocpfem.bench.config import (bisections, get_default_config, load_config, max_levels, parse_config,
                                 save_config, serialize_config, validate_config)
from ocpfem.bench.experiment import compare_regularizations, run_experiment, solver_study, summarize
from ocpfem.bench.targets import TARGET_REGISTRY, build_target, register_target
from ocpfem.ocp import SOLVER_NAMES
from ocpfem.utils.io_utils import read_csv, read_vtk_points


def _random_config(rng):
    config = get_default_config()
    config.EXPERIMENT.DIM = int(rng.integers(1, 4))
    config.EXPERIMENT.TARGET = str(rng.choice(['box', 'sine', 'zero', 'linear']))
    config.EXPERIMENT.REFINEMENT = str(rng.choice(['adaptive', 'uniform']))
    config.EXPERIMENT.MAX_LEVELS = int(rng.integers(-1, 20))
    config.EXPERIMENT.DOF_BUDGET = int(rng.integers(1, 10 ** 7))
    config.EXPERIMENT.SEED = int(rng.integers(0, 2 ** 31))
    config.EXPERIMENT.OUTPUT_DIR = 'output/run_{}'.format(int(rng.integers(0, 1000)))
    config.ADAPT.THETA = float(rng.uniform(0.01, 1.0))
    config.ADAPT.ABORT_ON_FAILURE = bool(rng.integers(0, 2))
    config.ADAPT.BISECTIONS = int(rng.integers(0, 4))
    names = rng.permutation(SOLVER_NAMES)[:int(rng.integers(1, len(SOLVER_NAMES) + 1))]
    config.SOLVER.NAMES = tuple(str(n) for n in names)
    config.SOLVER.TOL = float(10.0 ** rng.uniform(-12, -2))
    config.SOLVER.INNER = str(rng.choice(['cholesky', 'pcg']))
    config.SOLVER.BP_DELTA = float(rng.uniform(0.05, 0.95))
    config.QUADRATURE.DEPTH = int(rng.integers(0, 9))
    config.EXPORT.VTK = bool(rng.integers(0, 2))
    config.LOG.LEVEL = str(rng.choice(['DEBUG', 'INFO', 'WARNING']))
    return config


def test_config_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        config = _random_config(rng)
        text = serialize_config(config)
        parsed = parse_config(text)
        assert parsed == config
        assert serialize_config(parsed) == text


def test_config_file_round_trip(tmp_path):
    config = _random_config(np.random.default_rng(1))
    path = save_config(config, str(tmp_path / 'run' / 'config.txt'))
    assert load_config(path) == config


def test_parse_config_errors():
    with pytest.raises(ValueError):
        parse_config('EXPERIMENT.DIM 3')
    with pytest.raises(AssertionError):
        parse_config('EXPERIMENT.COLOR = "red"')
    config = parse_config('# comment\n\nEXPERIMENT.DIM = 3\n')
    assert config.EXPERIMENT.DIM == 3
    with pytest.raises(ValueError):
        load_config('/nonexistent/config.txt')


def test_yml_presets():
    folder = os.path.dirname(ocpfem.configs.__file__)
    config = load_config(os.path.join(folder, 'adaptive_2d.yml'))
    assert config.EXPERIMENT.MAX_LEVELS == 14
    assert tuple(config.SOLVER.NAMES) == ('pcg',)
    validate_config(config)
    config = load_config(os.path.join(folder, 'solvers_3d.yml'))
    assert tuple(config.SOLVER.NAMES) == ('pcg', 'cg', 'gmres', 'bpcg')
    validate_config(config)
    validate_config(load_config(os.path.join(folder, 'uniform_1d.yml')))


def test_validate_config():
    config = get_default_config()
    assert max_levels(config) == DEFAULT_MAX_LEVELS[2]
    config.EXPERIMENT.MAX_LEVELS = 3
    assert max_levels(config) == 3
    for key, value in (('EXPERIMENT.DIM', 4), ('ADAPT.THETA', 0.0), ('SOLVER.NAMES', ('amg',)),
                       ('SOLVER.BP_DELTA', 1.0), ('EXPERIMENT.REGULARIZATION', 'energy'),
                       ('ADAPT.BISECTIONS', -1), ('EXPERIMENT.TARGET', 'u3d'), ('EXPERIMENT.TARGET', 'gaussian')):
        bad = get_default_config()
        bad.merge_from_list([key, repr(value)])
        with pytest.raises(ValueError):
            validate_config(bad)


def test_target_registry():
    assert {'box', 'u1d', 'u2d', 'u3d', 'sine', 'linear', 'zero'} <= set(TARGET_REGISTRY)
    assert build_target('u2d', 2).l2_norm == pytest.approx(0.5)
    assert build_target('u3d', 3).l2_norm == pytest.approx(np.sqrt(0.125))
    assert build_target('box', 1).l2_norm == pytest.approx(np.sqrt(0.5))
    with pytest.raises(ValueError):
        build_target('u2d', 3)
    with pytest.raises(NotImplementedError):
        build_target('gaussian', 2)
    with pytest.raises(ValueError):
        register_target('box')(lambda dim: None)


def test_summarize():
    frame = pd.DataFrame({'dofs': [10, 40, 160], 'error': [1.0, 0.5, 0.25], 'converged': [True, True, True],
                          'its_pcg': [5, 6, 7], 'its_cg': [-1, -1, -1], 'its_gmres': [-1, -1, -1],
                          'its_bpcg': [-1, -1, -1]})
    summary = summarize(frame)
    assert summary['levels'] == 3
    assert summary['final_dofs'] == 160
    assert summary['rate'] == pytest.approx(-0.5)
    assert summary['max_its_pcg'] == 7
    assert 'max_its_cg' not in summary


def _small_config(tmp_path, dim=1, levels=3):
    config = get_default_config()
    config.EXPERIMENT.DIM = dim
    config.EXPERIMENT.MAX_LEVELS = levels
    config.EXPERIMENT.OUTPUT_DIR = str(tmp_path)
    config.LOG.LEVEL = 'WARNING'
    return config


def test_run_experiment_outputs(tmp_path):
    records, summary = run_experiment(_small_config(tmp_path))
    assert len(records) == 4
    assert summary['levels'] == 4 and summary['converged']
    frame = read_csv(os.path.join(str(tmp_path), 'levels.csv'))
    assert len(frame) == 4
    assert list(frame.columns[:11]) == ['level', 'N', 'dofs', 'h_min', 'h_max', 'error', 'its_pcg', 'its_cg',
                                        'its_gmres', 'its_bpcg', 'seconds']
    assert os.path.exists(os.path.join(str(tmp_path), 'summary.txt'))
    assert load_config(os.path.join(str(tmp_path), 'config.txt')).EXPERIMENT.MAX_LEVELS == 3


def test_run_experiment_is_reproducible(tmp_path):
    first = _small_config(tmp_path / 'a', dim=2, levels=2)
    second = _small_config(tmp_path / 'b', dim=2, levels=2)
    run_experiment(first)
    run_experiment(second)
    a = read_csv(os.path.join(str(tmp_path / 'a'), 'levels.csv')).drop(columns=['seconds'])
    b = read_csv(os.path.join(str(tmp_path / 'b'), 'levels.csv')).drop(columns=['seconds'])
    pd.testing.assert_frame_equal(a, b)


def test_compare_regularizations(tmp_path):
    table, rates = compare_regularizations(1, levels=3, config=_small_config(tmp_path))
    assert set(table['curve']) == {'l2_uniform', 'energy_uniform', 'diffusion_adaptive'}
    assert set(rates) == set(table['curve'])
    assert all(rate < 0.0 for rate in rates.values())
    assert os.path.exists(os.path.join(str(tmp_path), 'compare.csv'))


def test_solver_study(tmp_path):
    tables = solver_study(_small_config(tmp_path, levels=1), modes=('uniform',), dimension=2)
    frame = tables['uniform']
    assert list(frame['dofs']) == [9, 49]
    assert (frame[['its_pcg', 'its_cg', 'its_gmres', 'its_bpcg']] > 0).all().all()
    assert os.path.exists(os.path.join(str(tmp_path), 'solvers_uniform.csv'))
    with pytest.raises(ValueError):
        solver_study(_small_config(tmp_path, levels=1), modes=('random',), dimension=2)


def test_cli_bad_arguments(capsys):
    assert cli_main(['adapt', '--bogus']) == 2
    assert cli_main([]) == 2
    assert cli_main(['adapt', '--dim', '4']) == 2
    assert cli_main(['adapt', '--theta', '1.5', '--log-level', 'ERROR']) == 2


def test_cli_config_precedence(tmp_path):
    path = str(tmp_path / 'flat.txt')
    with open(path, 'w', encoding='utf-8') as f:
        f.write('EXPERIMENT.DIM = 3\nADAPT.THETA = 0.3\n')
    args = build_parser().parse_args(['adapt', '--config', path, '--theta', '0.7', 'SOLVER.TOL', '1e-8'])
    config = config_from_args(args)
    assert config.EXPERIMENT.DIM == 3
    assert config.ADAPT.THETA == 0.7
    assert config.SOLVER.TOL == 1e-8


def test_cli_adapt_and_export(tmp_path, capsys):
    out = str(tmp_path)
    code = cli_main(['adapt', '--dim', '2', '--levels', '2', '--out', out, '--vectors', '--log-level', 'WARNING'])
    assert code == 0
    assert len(read_csv(os.path.join(out, 'levels.csv'))) == 3
    assert 'final_error' in capsys.readouterr().out
    assert cli_main(['export', '--out', out, '--log-level', 'WARNING']) == 0
    vtk = os.path.join(out, 'vtk', 'level_002.vtk')
    points, cells, point_data = read_vtk_points(vtk)
    assert cells.shape[1] == 3
    assert {'u', 'p', 'z', 'u_bar'} <= set(point_data)
    assert points.shape[0] == len(point_data['u'])


def test_cli_solve_reports_last_level(tmp_path, capsys):
    code = cli_main(['solve', '--dim', '1', '--levels', '2', '--solver', 'pcg', '--solver', 'cg', '--out',
                     str(tmp_path), '--log-level', 'WARNING'])
    assert code == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert line.startswith('level=2 ')
    assert 'its_gmres=-1' in line


def test_cli_uniform_l2(tmp_path):
    code = cli_main(['uniform', '--dim', '1', '--levels', '3', '--regularization', 'l2', '--out', str(tmp_path),
                     '--log-level', 'WARNING'])
    assert code == 0
    frame = read_csv(os.path.join(str(tmp_path), 'levels.csv'))
    assert list(frame['N']) == [4, 8, 16, 32]
    assert (frame['regularization'] == 'l2').all()


def test_cli_solver_failure_exit_code(tmp_path):
    code = cli_main(['adapt', '--dim', '2', '--levels', '2', '--solver', 'cg', '--out', str(tmp_path),
                     '--log-level', 'ERROR', 'SOLVER.MAXIT', '1', 'SOLVER.TOL', '1e-14'])
    assert code == 1


def test_bisections_default_follows_dimension():
    config = get_default_config()
    for dim in (1, 2, 3):
        config.EXPERIMENT.DIM = dim
        assert bisections(config) == dim
    config.ADAPT.BISECTIONS = 1
    assert bisections(config) == 1


def test_cli_rejects_target_before_running(tmp_path):
    code = cli_main(['adapt', '--dim', '3', '--target', 'u2d', '--out', str(tmp_path), '--log-level', 'ERROR'])
    assert code == 2
    assert not os.path.exists(os.path.join(str(tmp_path), 'levels.csv'))
    assert cli_main(['export', '--out', str(tmp_path / 'missing'), '--log-level', 'ERROR']) == 2


def test_cli_error_inside_run_exit_code(tmp_path, monkeypatch):
    def broken_run(config):
        raise ValueError("matrix has a nan entry")

    monkeypatch.setattr('ocpfem.bench.cli.run_experiment', broken_run)
    code = cli_main(['adapt', '--dim', '2', '--levels', '1', '--out', str(tmp_path), '--log-level', 'ERROR'])
    assert code == 1
    code = cli_main(['solve', '--dim', '1', '--out', str(tmp_path), '--log-level', 'ERROR'])
    assert code == 1


def test_solver_reports_csv(tmp_path):
    config = _small_config(tmp_path, dim=2, levels=2)
    config.SOLVER.NAMES = ('pcg', 'gmres')
    records, _ = run_experiment(config)
    frame = read_csv(os.path.join(str(tmp_path), 'solvers.csv'))
    assert {'level', 'method', 'solver', 'iterations'} <= set(frame.columns)
    assert len(frame) == 2 * len(records)
    assert sorted(set(frame['method'])) == ['gmres', 'pcg']
    for record in records:
        rows = frame[frame['level'] == record.level].set_index('method')
        assert rows.loc['pcg', 'iterations'] == record.its_pcg
        assert rows.loc['gmres', 'iterations'] == record.its_gmres
