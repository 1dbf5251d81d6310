# -*- coding: utf-8 -*-
"""
Command line drivers for CPM eigenvalue experiments
"""

import argparse
import logging
import os
from fractions import Fraction

import numpy as np

from . import io
from .eig import (compute_spectrum, filter_spurious, histogram_real,
                  realify, sample_eigenfunction, select_modes)
from .errors import ConfigurationError, CPMError
from .examples import available_experiments, experiment_config
from .harness import (discretize_level, make_inputs_surface, run_study,
                      solve_level)
from .structures import CPMInputs, SpectralResult

_LOGGER = logging.getLogger(__name__)

COMMANDS = ('spectrum', 'converge', 'modes', 'cond', 'compare-unstab')
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

_FLOAT_KEYS = {'radius', 't0', 't1', 'offset', 'width', 'shift', 'imag_tol',
               'cutoff_window', 'cluster_window', 'mode_target'}
_INT_KEYS = {'subdivisions', 'frequency', 'q', 'p', 'k_eigs', 'dense_max',
             'n_track', 'n_modes', 'hist_bins', 'max_nodes'}
_BOOL_KEYS = {'condition', 'keep_seed', 'verbose'}
_LIST_KEYS = {'dx_list', 'outputs'}
_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')


def _number(key, text):
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError('Cannot interpret {!r} as a number for {}.'
                                 .format(text, key))


def parse_value(key, text):
    """
    Converts the text `text` of config entry `key` to its Python value

    Parameters
    ----------
    key : str
        Name of a :obj:`~.structures.CPMInputs` entry
    text : str
        Raw value; fractions such as ``1/32`` are accepted for numbers and
        lists are comma separated

    Returns
    -------
    value
        Converted value; 'none' (any case) and empty text give None, except
        for lists which are then empty

    Raises
    ------
    ConfigurationError
        If `key` is unknown or `text` cannot be converted
    """

    if key not in CPMInputs.allowed:
        raise ConfigurationError('Unknown configuration key {!r}. Valid '
                                 'keys: {}'.format(key, ', '.join(
                                     CPMInputs.allowed)))
    text = text.strip()

    if key in _LIST_KEYS:
        items = [t.strip() for t in text.split(',') if t.strip()]
        if key == 'dx_list':
            return [_number(key, t) for t in items]
        return items
    if not text or text.lower() == 'none':
        return None
    if key in _FLOAT_KEYS:
        return _number(key, text)
    if key in _INT_KEYS:
        value = _number(key, text)
        if value != int(value):
            raise ConfigurationError('{} must be an integer, not {!r}'
                                     .format(key, text))
        return int(value)
    if key in _BOOL_KEYS:
        if text.lower() in _TRUE:
            return True
        if text.lower() in _FALSE:
            return False
        raise ConfigurationError('Cannot interpret {!r} as a boolean for {}.'
                                 .format(text, key))
    return text


def parse_assignment(line):
    """
    Splits a ``key = value`` assignment and converts the value

    Parameters
    ----------
    line : str
        Assignment; anything after '#' is ignored

    Returns
    -------
    key : str
    value
        As returned by :func:`parse_value`
    """

    line = line.split('#', 1)[0]
    if '=' not in line:
        raise ConfigurationError('Expected a key = value assignment, got {!r}'
                                 .format(line.strip()))
    key, text = line.split('=', 1)
    key = key.strip()
    return key, parse_value(key, text)


def read_config(fname):
    """
    Reads a ``key = value`` configuration file

    Parameters
    ----------
    fname : str
        Path to the configuration file

    Returns
    -------
    config : dict
    """

    config = {}
    with open(fname, 'r') as src:
        for line in src:
            # skip blank and comment lines
            if line.split('#', 1)[0].strip():
                key, value = parse_assignment(line)
                config[key] = value
    return config


def load_config(config=None, overrides=None):
    """
    Builds CPM inputs from a config file or packaged experiment name

    Parameters
    ----------
    config : str, optional
        Path to a configuration file or name of a packaged experiment
    overrides : list of str, optional
        ``key=value`` assignments applied after `config`

    Returns
    -------
    inputs : :obj:`~.structures.CPMInputs`
    """

    params = {}
    if config is not None:
        if os.path.isfile(config):
            params.update(read_config(config))
        elif config in available_experiments():
            params.update(experiment_config(config))
        else:
            valid = ', '.join(available_experiments())
            raise ConfigurationError('Config {!r} is neither a file nor a '
                                     'packaged experiment ({}).'.format(
                                         config, valid))
    # overrides win over the config
    for line in overrides or []:
        key, value = parse_assignment(line)
        params[key] = value
    if 'dx_list' in params and params['dx_list'] is not None:
        params['dx_list'] = list(np.atleast_1d(params['dx_list']))
        if not params['dx_list']:
            raise ConfigurationError('dx_list must not be empty.')
    return CPMInputs(**params)


def _write_spectrum(inputs, out, res, suffix=''):
    written = []
    if 'csv' in inputs.outputs:
        written.append(io.write_spectrum_csv(
            os.path.join(out, 'spectrum{}.csv'.format(suffix)), res))
    if 'dat' in inputs.outputs:
        counts, edges = histogram_real(res, bins=inputs.hist_bins)
        written.append(io.write_histogram(
            os.path.join(out, 'histogram{}.dat'.format(suffix)),
            counts, edges))
    if 'hdf5' in inputs.outputs:
        written.append(io.save_results(
            os.path.join(out, 'spectrum{}'.format(suffix)), res))
    return written


def _write_level(inputs, out, band, ops):
    written = []
    if 'mtx' in inputs.outputs:
        for name in ('M', 'M_tilde', 'E', 'delta_h'):
            written.append(io.write_matrix_market(
                os.path.join(out, '{}.mtx'.format(name)), ops[name]))
    if 'band' in inputs.outputs:
        written.append(io.write_band_csv(os.path.join(out, 'band.csv'), band))
    return written


def cmd_spectrum(inputs, out):
    """
    Solves the first level of `inputs` and writes its spectrum

    Writes spectrum.csv and histogram.dat, plus the optional outputs.

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
    out : str
        Output directory

    Returns
    -------
    written : list of str
        Paths of written files
    """

    band, ops, res = solve_level(inputs)
    _LOGGER.info('Band has %d nodes; kept %d of %d eigenvalues', band.m,
                 len(res.filter.kept), len(res.eigenvalues))
    return _write_spectrum(inputs, out, res) + _write_level(inputs, out,
                                                           band, ops)


def cmd_compare_unstab(inputs, out):
    """
    Solves the first level with both the stabilized and plain operators

    Writes spectrum_stabilized.csv, spectrum_unstabilized.csv and the two
    histograms.

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
    out : str
        Output directory

    Returns
    -------
    written : list of str
    """

    dx = inputs.dx_list[0]
    surface = make_inputs_surface(inputs)
    band, ops = discretize_level(surface, dx, p=inputs.p, q=inputs.q,
                                 bc=inputs.bc, keep_seed=inputs.keep_seed,
                                 max_nodes=inputs.max_nodes,
                                 n_proc=inputs.n_proc)
    written = []
    for operator, op in [('stabilized', ops.M), ('unstabilized',
                                                 ops.M_tilde)]:
        res = compute_spectrum(op, k=inputs.k_eigs, shift=inputs.shift,
                               method=inputs.solver,
                               dense_max=inputs.dense_max)
        res.operator = operator
        filter_spurious(res, dx, surface.dim, imag_tol=inputs.imag_tol,
                        cutoff_window=inputs.cutoff_window)
        written += _write_spectrum(inputs, out, res, suffix='_' + operator)
    return written + _write_level(inputs, out, band, ops)


def cmd_modes(inputs, out):
    """
    Writes selected eigenfunctions as point clouds on the surface

    Modes are sampled at the closest points of the non-ghost band nodes
    and written as mode_XXX.vtk, with their eigenvalues in modes.csv.

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
    out : str
        Output directory

    Returns
    -------
    written : list of str
    """

    dx = inputs.dx_list[0]
    band, ops, res = solve_level(inputs)
    # discretization splits multiplets by O(dx**2)
    window = (10 * dx ** 2 if inputs.cluster_window is None
              else inputs.cluster_window)
    idx = select_modes(res, n_modes=inputs.n_modes,
                       target=inputs.mode_target, window=window)
    if len(idx) == 0:
        raise CPMError('No eigenpairs survived filtering; nothing to write.')

    # several nodes share a closest point near the boundary
    points = np.unique(band.cp[~band.ghost], axis=0)
    values = sample_eigenfunction(
        SpectralResult(eigenvectors=realify(res.eigenvectors[:, idx])),
        band, band.grid, inputs.p, points)

    written = []
    for n, i in enumerate(idx):
        written.append(io.write_vtk_points(
            os.path.join(out, 'mode_{:03d}.vtk'.format(n)), points,
            values[:, n], name='mode'))
    vals = np.asarray(res.eigenvalues)[idx]
    written.append(io.write_modes_csv(os.path.join(out, 'modes.csv'), idx,
                                      vals))
    _LOGGER.info('Wrote %d modes sampled at %d surface points', len(idx),
                 len(points))
    return written + _write_level(inputs, out, band, ops)


def cmd_converge(inputs, out):
    """
    Runs a convergence study and writes its tables

    Writes study.csv and one loglog_XX.dat per tracked eigenvalue.

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
    out : str
        Output directory

    Returns
    -------
    written : list of str
    """

    report = run_study(inputs)
    for lam, order in zip(report.lambda_analytic, report.orders):
        _LOGGER.info('lambda = %.6g: observed order %.3f', lam, order)

    written = [io.write_study_csv(os.path.join(out, 'study.csv'), report)]
    # one log-log file per tracked eigenvalue
    if 'dat' in inputs.outputs:
        for n in range(len(report.lambda_analytic)):
            written.append(io.write_loglog(
                os.path.join(out, 'loglog_{:02d}.dat'.format(n + 1)),
                report.dx, report.abs_err[:, n]))
    if inputs.condition:
        written.append(io.write_condition_csv(
            os.path.join(out, 'condition.csv'), report))
    if 'hdf5' in inputs.outputs:
        written.append(io.save_results(os.path.join(out, 'study'), report))
    return written


def cmd_cond(inputs, out):
    """
    Computes 2-norm condition numbers per level and writes condition.csv

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
    out : str
        Output directory

    Returns
    -------
    written : list of str
    """

    inputs.condition = True
    report = run_study(inputs, spectra=False)
    for dx, m, kappa in zip(report.dx, report.m, report.kappa):
        _LOGGER.info('dx = %.6g, m = %d: kappa = %.6g', dx, m, kappa)
    written = [io.write_condition_csv(os.path.join(out, 'condition.csv'),
                                      report)]
    if 'hdf5' in inputs.outputs:
        written.append(io.save_results(os.path.join(out, 'cond'), report))
    return written


_COMMANDS = {
    'spectrum': cmd_spectrum,
    'converge': cmd_converge,
    'modes': cmd_modes,
    'cond': cmd_cond,
    'compare-unstab': cmd_compare_unstab,
}


def get_parser():
    """ Returns the argument parser of the `pycpm` command """

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH',
                        help='Configuration file of key = value lines, or '
                             'the name of a packaged experiment')
    common.add_argument('--out', metavar='DIR', default='.',
                        help='Output directory. Default: current directory')
    common.add_argument('--set', metavar='KEY=VALUE', action='append',
                        default=[], dest='overrides',
                        help='Override a configuration value; repeatable')
    common.add_argument('--quiet', action='store_true',
                        help='Only log warnings and disable progress bars')

    parser = argparse.ArgumentParser(
        prog='pycpm',
        description='Closest point method eigenvalue experiments')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    helps = {
        'spectrum': 'spectrum and real-axis histogram of one level',
        'converge': 'eigenvalue convergence study over dx_list',
        'modes': 'eigenfunctions sampled on the surface as VTK files',
        'cond': 'condition numbers over dx_list',
        'compare-unstab': 'spectra of the stabilized and plain operators',
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    """
    Runs the `pycpm` command line interface

    Parameters
    ----------
    argv : list of str, optional
        Arguments. Default: ``sys.argv[1:]``

    Returns
    -------
    code : int
        0 on success, 2 on configuration or file access errors and 3 on
        other failures
    """

    args = get_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format='%(asctime)s %(name)s %(levelname)s: %(message)s')

    try:
        inputs = load_config(args.config, args.overrides)
        if args.quiet:
            inputs.verbose = False
        os.makedirs(args.out, exist_ok=True)
        written = _COMMANDS[args.command](inputs, args.out)
    except ConfigurationError as err:
        _LOGGER.error('Configuration error: %s', err)
        return EXIT_CONFIG
    # unwritable output directory or missing mesh file
    except OSError as err:
        _LOGGER.error('Cannot access %s: %s', err.filename, err.strerror)
        return EXIT_CONFIG
    except CPMError as err:
        _LOGGER.error('%s failed: %s', args.command, err)
        return EXIT_NUMERIC

    for fname in written:
        _LOGGER.info('Wrote %s', fname)
    return EXIT_OK
