# -*- coding: utf-8 -*-
"""
@description: experiment configuration: yacs defaults, yml presets and flat key = value files

A flat file holds one `GROUP.KEY = value` line per option, values written as
Python literals; lines starting with # are comments.
"""
import os

from yacs.config import CfgNode

from ocpfem.adaptivity import DEFAULT_MAX_LEVELS, REGULARIZATIONS
from ocpfem.bench.targets import TARGET_REGISTRY
from ocpfem.configs import cfg as _default_cfg
from ocpfem.linalg import INNER_MODES
from ocpfem.ocp import SOLVER_NAMES

REFINEMENTS = ('adaptive', 'uniform')


def get_default_config() -> CfgNode:
    return _default_cfg.clone()


def _flatten(node, prefix=''):
    for key in sorted(node.keys()):
        value = node[key]
        name = prefix + key
        if isinstance(value, CfgNode):
            yield from _flatten(value, name + '.')
        else:
            yield name, value


def serialize_config(config: CfgNode) -> str:
    lines = ['{} = {!r}'.format(name, value) for name, value in _flatten(config)]
    return '\n'.join(lines) + '\n'


def parse_config(text, base: CfgNode = None) -> CfgNode:
    """Config from flat text, on top of `base` (defaults when None)."""
    config = (base or _default_cfg).clone()
    opts = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ValueError("line {}: expected KEY = value, got {!r}".format(number, raw))
        key, value = (part.strip() for part in line.split('=', 1))
        opts.extend([key, value])
    config.merge_from_list(opts)
    return config


def load_config(path, base: CfgNode = None) -> CfgNode:
    """yml presets are merged with merge_from_file, anything else is read as a flat file."""
    if not os.path.exists(path):
        raise ValueError("config file {} not found".format(path))
    if os.path.splitext(path)[1] in ('.yml', '.yaml'):
        config = (base or _default_cfg).clone()
        config.merge_from_file(path)
        return config
    with open(path, 'r', encoding='utf-8') as f:
        return parse_config(f.read(), base)


def save_config(config: CfgNode, path):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize_config(config))
    return path


def validate_config(config: CfgNode):
    """Raises ValueError for option values the drivers cannot run with."""
    exp = config.EXPERIMENT
    if exp.DIM not in (1, 2, 3):
        raise ValueError("EXPERIMENT.DIM must be 1, 2 or 3, got {}".format(exp.DIM))
    if exp.TARGET not in TARGET_REGISTRY:
        raise ValueError("unknown target {}, known: {}".format(exp.TARGET, sorted(TARGET_REGISTRY)))
    if exp.DIM not in TARGET_REGISTRY[exp.TARGET][1]:
        raise ValueError("target {} is not defined in dimension {}".format(exp.TARGET, exp.DIM))
    if exp.REGULARIZATION not in REGULARIZATIONS:
        raise ValueError("EXPERIMENT.REGULARIZATION must be one of {}".format(REGULARIZATIONS))
    if exp.REFINEMENT not in REFINEMENTS:
        raise ValueError("EXPERIMENT.REFINEMENT must be one of {}".format(REFINEMENTS))
    if exp.REFINEMENT == 'adaptive' and exp.REGULARIZATION != 'diffusion':
        raise ValueError("adaptive refinement runs the diffusion regularization only")
    if exp.MAX_LEVELS < -1:
        raise ValueError("EXPERIMENT.MAX_LEVELS must be >= 0, or -1 for the default")
    if not 0.0 < config.ADAPT.THETA <= 1.0:
        raise ValueError("ADAPT.THETA must lie in (0, 1]")
    if config.ADAPT.BISECTIONS < 0:
        raise ValueError("ADAPT.BISECTIONS must be >= 0, or 0 for one per dimension")
    if not config.SOLVER.NAMES:
        raise ValueError("SOLVER.NAMES must not be empty")
    for name in config.SOLVER.NAMES:
        if name not in SOLVER_NAMES:
            raise ValueError("unknown solver {}, expected one of {}".format(name, SOLVER_NAMES))
    if config.SOLVER.INNER not in INNER_MODES:
        raise ValueError("SOLVER.INNER must be one of {}".format(INNER_MODES))
    if not 0.0 < config.SOLVER.TOL < 1.0:
        raise ValueError("SOLVER.TOL must lie in (0, 1)")
    if not 0.0 < config.SOLVER.BP_DELTA < 1.0:
        raise ValueError("SOLVER.BP_DELTA must lie in (0, 1)")
    return config


def max_levels(config: CfgNode):
    if config.EXPERIMENT.MAX_LEVELS < 0:
        return DEFAULT_MAX_LEVELS[config.EXPERIMENT.DIM]
    return config.EXPERIMENT.MAX_LEVELS


def bisections(config: CfgNode):
    return config.ADAPT.BISECTIONS or config.EXPERIMENT.DIM
