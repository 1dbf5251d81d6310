# -*- coding: utf-8 -*-

import os
import os.path as op

import numpy as np
import pandas as pd
import pytest
from pycpm import cli
from pycpm.errors import ConfigurationError

CONFIG = """\
# small circle run
surface = circle
dx_list = 1/5, 1/10   # two levels
solver = arnoldi
k_eigs = 6
shift = -1/2
n_track = 2
hist_bins = 10
"""


@pytest.fixture(scope='module')
def config(tmpdir_factory):
    fname = str(tmpdir_factory.mktemp('config').join('circle.cfg'))
    with open(fname, 'w') as dest:
        dest.write(CONFIG)
    return fname


@pytest.mark.parametrize(('key', 'text', 'value'), [
    ('dx_list', '1/16, 1/32', [0.0625, 0.03125]),
    ('dx_list', '0.1', [0.1]),
    ('outputs', 'csv,mtx', ['csv', 'mtx']),
    ('k_eigs', '12', 12),
    ('k_eigs', '24/2', 12),
    ('shift', '-1/2', -0.5),
    ('cutoff_window', 'None', None),
    ('cutoff_window', '', None),
    ('condition', 'yes', True),
    ('keep_seed', 'False', False),
    ('surface', ' hemisphere ', 'hemisphere'),
])
def test_parse_value(key, text, value):
    assert cli.parse_value(key, text) == value


@pytest.mark.parametrize(('key', 'text'), [
    ('notakey', '1'),
    ('k_eigs', '2.5'),
    ('shift', 'abc'),
    ('radius', '1/0'),
    ('condition', 'maybe'),
])
def test_parse_value_errors(key, text):
    with pytest.raises(ConfigurationError):
        cli.parse_value(key, text)


def test_parse_assignment():
    assert cli.parse_assignment('k_eigs = 12  # comment') == ('k_eigs', 12)
    assert cli.parse_assignment('bc=dirichlet_homogeneous') == \
        ('bc', 'dirichlet_homogeneous')
    with pytest.raises(ConfigurationError):
        cli.parse_assignment('k_eigs 12')


def test_load_config(config):
    raw = cli.read_config(config)
    assert raw['dx_list'] == [0.2, 0.1] and raw['k_eigs'] == 6
    inputs = cli.load_config(config, ['k_eigs=8', 'verbose=false'])
    assert inputs.k_eigs == 8 and inputs.verbose is False
    assert inputs.shift == -0.5 and inputs.surface == 'circle'

    inputs = cli.load_config('semicircle_spectrum', ['dx_list=1/8'])
    assert inputs.bc == 'dirichlet_homogeneous'
    assert inputs.dx_list == [0.125]

    with pytest.raises(ConfigurationError):
        cli.load_config('not_a_config')
    with pytest.raises(ConfigurationError):
        cli.load_config(config, ['dx_list='])
    with pytest.raises(ConfigurationError):
        cli.load_config(None, ['dx_list=0.1'])


def test_parser():
    parser = cli.get_parser()
    args = parser.parse_args(['converge', '--config', 'a.cfg', '--set',
                              'q=4', '--set', 'p=5', '--quiet'])
    assert args.command == 'converge' and args.config == 'a.cfg'
    assert args.overrides == ['q=4', 'p=5'] and args.quiet
    assert args.out == '.'
    with pytest.raises(SystemExit):
        parser.parse_args([])
    with pytest.raises(SystemExit):
        parser.parse_args(['plot'])


def test_spectrum(tmpdir, config):
    out = str(tmpdir)
    code = cli.main(['spectrum', '--config', config, '--out', out,
                     '--set', 'outputs=csv,dat,hdf5,mtx,band', '--quiet'])
    assert code == cli.EXIT_OK
    for fname in ['spectrum.csv', 'histogram.dat', 'spectrum.hdf5',
                  'M.mtx', 'M_tilde.mtx', 'E.mtx', 'delta_h.mtx',
                  'band.csv']:
        assert op.isfile(op.join(out, fname))
    frame = pd.read_csv(op.join(out, 'spectrum.csv'), keep_default_na=False)
    assert len(frame) == 6
    hist = pd.read_csv(op.join(out, 'histogram.dat'), sep=' ')
    assert len(hist) == 10 and hist['count'].sum() == 6


def test_compare_unstab(tmpdir, config):
    out = str(tmpdir)
    code = cli.main(['compare-unstab', '--config', config, '--out', out,
                     '--quiet'])
    assert code == cli.EXIT_OK
    for fname in ['spectrum_stabilized.csv', 'spectrum_unstabilized.csv',
                  'histogram_stabilized.dat', 'histogram_unstabilized.dat']:
        assert op.isfile(op.join(out, fname))


def test_modes(tmpdir, config):
    out = str(tmpdir)
    code = cli.main(['modes', '--config', config, '--out', out,
                     '--set', 'n_modes=3', '--quiet'])
    assert code == cli.EXIT_OK
    modes = pd.read_csv(op.join(out, 'modes.csv'))
    assert len(modes) == 3
    assert np.allclose(modes['re'], [0, 1, 1], atol=0.1)
    vtk = sorted(f for f in os.listdir(out) if f.endswith('.vtk'))
    assert vtk == ['mode_000.vtk', 'mode_001.vtk', 'mode_002.vtk']

    # multiplet nearest a target eigenvalue
    out = str(tmpdir.mkdir('target'))
    code = cli.main(['modes', '--config', config, '--out', out,
                     '--set', 'mode_target=4', '--quiet'])
    assert code == cli.EXIT_OK
    modes = pd.read_csv(op.join(out, 'modes.csv'))
    assert len(modes) == 2 and np.allclose(modes['re'], 4, rtol=0.05)


def test_converge_and_cond(tmpdir, config):
    out = str(tmpdir)
    code = cli.main(['converge', '--config', config, '--out', out,
                     '--set', 'dx_list=1/5,1/10,1/20', '--set',
                     'condition=true', '--quiet'])
    assert code == cli.EXIT_OK
    study = pd.read_csv(op.join(out, 'study.csv'))
    assert len(study) == 3 * 2
    for fname in ['loglog_01.dat', 'loglog_02.dat', 'condition.csv']:
        assert op.isfile(op.join(out, fname))

    out = str(tmpdir.mkdir('cond'))
    code = cli.main(['cond', '--config', config, '--out', out, '--quiet'])
    assert code == cli.EXIT_OK
    cond = pd.read_csv(op.join(out, 'condition.csv'))
    assert list(cond['dx']) == [0.2, 0.1]
    assert np.all(cond['kappa'] > 1)


def test_exit_codes(tmpdir, config):
    out = str(tmpdir)
    assert cli.main(['spectrum', '--config', config, '--out', out,
                     '--set', 'notakey=1', '--quiet']) == cli.EXIT_CONFIG
    assert cli.main(['spectrum', '--config', config, '--out', out,
                     '--set', 'bc=robin', '--quiet']) == cli.EXIT_CONFIG
    assert cli.main(['spectrum', '--config', 'not_a_config', '--out',
                     out, '--quiet']) == cli.EXIT_CONFIG
    assert cli.main(['spectrum', '--config', config, '--out', out,
                     '--set', 'max_nodes=10', '--quiet']) == \
        cli.EXIT_NUMERIC
    assert cli.main(['modes', '--config', config, '--out', out,
                     '--set', 'cutoff_window=1e9', '--quiet']) == \
        cli.EXIT_NUMERIC


def test_file_access_errors(tmpdir, config):
    # output directory below a regular file
    blocker = tmpdir.join('blocker')
    blocker.write('')
    out = op.join(str(blocker), 'results')
    assert cli.main(['spectrum', '--config', config, '--out', out,
                     '--quiet']) == cli.EXIT_CONFIG

    out = str(tmpdir.mkdir('mesh'))
    missing = op.join(out, 'missing.off')
    assert cli.main(['spectrum', '--config', config, '--out', out,
                     '--set', 'surface=triangulated_mesh',
                     '--set', 'mesh={}'.format(missing),
                     '--quiet']) == cli.EXIT_CONFIG


@pytest.mark.parametrize(('experiment', 'overrides', 'count'), [
    ('l_shape_dirichlet', [], 15),
    ('hemisphere_neumann', ['dx_list=1/8', 'mode_target=20',
                            'cluster_window=1'], 5),
])
def test_modes_experiments(tmpdir, experiment, overrides, count):
    out = str(tmpdir)
    argv = ['modes', '--config', experiment, '--out', out, '--quiet']
    for assignment in overrides:
        argv += ['--set', assignment]
    assert cli.main(argv) == cli.EXIT_OK
    vtk = [f for f in os.listdir(out) if f.endswith('.vtk')]
    assert len(vtk) == count
    modes = pd.read_csv(op.join(out, 'modes.csv'))
    assert len(modes) == count
    if experiment == 'hemisphere_neumann':
        assert np.allclose(modes['re'], 20, rtol=0.05)
