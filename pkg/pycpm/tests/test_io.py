# -*- coding: utf-8 -*-

import os.path as op

import h5py
import numpy as np
import pandas as pd
import pytest
from scipy import io as sio
import pycpm
from pycpm import geometry, io
from pycpm.eig import compute_spectrum, filter_spurious
from pycpm.errors import DomainError
from pycpm.harness import run_study


@pytest.fixture(scope='module')
def spectrum(circle_level):
    band, ops = circle_level
    res = compute_spectrum(ops.M, k=6, shift=-0.5, method='arnoldi')
    res.operator = 'stabilized'
    filter_spurious(res, band.grid.dx, 2)
    return res


@pytest.fixture(scope='module')
def study(cpm_inputs):
    with pytest.warns(UserWarning):
        return run_study(**cpm_inputs)


def test_load_save(testdir, spectrum, study):
    for res, fn in zip([spectrum, study], ['spectrum', 'study']):
        fname = pycpm.save_results(op.join(testdir, fn), res)
        assert op.isfile(fname) and fname.endswith('.hdf5')
        assert h5py.is_hdf5(fname)
        loaded = pycpm.load_results(fname)
        assert type(loaded) is type(res)
        assert loaded == res

    loaded = pycpm.load_results(op.join(testdir, 'study'))
    assert loaded.inputs.outputs == ['csv', 'dat']
    assert loaded.inputs.n_proc is None
    assert list(loaded.inputs.dx_list) == [0.2, 0.1]

    with pytest.raises(TypeError):
        pycpm.load_results(testdir)


def test_off(testdir):
    mesh = geometry.icosphere(1)
    fname = io.write_off(op.join(testdir, 'mesh', 'ico.off'), mesh)
    loaded = io.read_off(fname, reference='sphere')
    assert np.allclose(loaded.vertices, mesh.vertices)
    assert np.all(loaded.triangles == mesh.triangles)
    assert loaded.reference()[0] == 'sphere'

    fname = op.join(testdir, 'tri.off')
    with open(fname, 'w') as dest:
        dest.write('# single triangle\nOFF 3 1 0\n0 0 0\n1 0 0  # corner\n'
                   '0 1 0\n\n3 0 1 2\n')
    tri = io.read_off(fname)
    assert tri.open and len(tri.triangles) == 1


@pytest.mark.parametrize('content', [
    'PLY\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n',
    'OFF\nthree 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n',
    'OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n',
    'OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 3 2\n',
])
def test_read_off_errors(testdir, content):
    fname = op.join(testdir, 'bad.off')
    with open(fname, 'w') as dest:
        dest.write(content)
    with pytest.raises(DomainError):
        io.read_off(fname)


def test_vtk(testdir):
    points = np.array([[0., 0.], [1., 0.5], [2., 1.]])
    fname = io.write_vtk_points(op.join(testdir, 'mode.vtk'), points,
                                [0.1, 0.2, 0.3], name='mode_000')
    with open(fname) as src:
        lines = src.read().splitlines()
    assert lines[0] == '# vtk DataFile Version 3.0'
    assert 'DATASET POLYDATA' in lines
    assert 'POINTS 3 float' in lines
    assert 'VERTICES 3 6' in lines
    assert 'SCALARS mode_000 float 1' in lines
    coords = lines[lines.index('POINTS 3 float') + 2].split()
    assert np.allclose([float(c) for c in coords], [1., 0.5, 0.])
    assert np.isclose(float(lines[-1]), 0.3)
    with pytest.raises(DomainError):
        io.write_vtk_points(fname, points, [0.1, 0.2])


def test_matrix_market(testdir, circle_level):
    band, ops = circle_level
    fname = io.write_matrix_market(op.join(testdir, 'M'), ops.M,
                                   comment='stabilized')
    assert fname.endswith('.mtx') and op.isfile(fname)
    loaded = sio.mmread(fname).tocsr()
    assert abs(loaded - ops.M).max() < 1e-10
    assert sio.mminfo(fname)[-2:] == ('real', 'general')


def test_band_csv(testdir, semicircle_level, sphere_level):
    band, _ = semicircle_level
    frame = pd.read_csv(io.write_band_csv(op.join(testdir, 'band.csv'),
                                          band))
    assert list(frame.columns) == ['idx', 'i', 'j', 'cpx', 'cpy', 'dist',
                                   'ghost']
    assert len(frame) == band.m
    assert frame['ghost'].sum() == band.n_ghost

    band, _ = sphere_level
    frame = pd.read_csv(io.write_band_csv(op.join(testdir, 'band3.csv'),
                                          band))
    assert 'k' in frame.columns and 'cpz' in frame.columns


def test_spectrum_csv(testdir, spectrum):
    frame = pd.read_csv(io.write_spectrum_csv(op.join(testdir, 'spec.csv'),
                                              spectrum),
                        keep_default_na=False)
    assert list(frame.columns) == ['idx', 're', 'im', 'residual', 'kept',
                                   'reason']
    assert len(frame) == 6
    assert frame['kept'].sum() == len(spectrum.filter.kept)
    assert np.allclose(frame['re'], spectrum.eigenvalues.real)


def test_text_tables(testdir, study):
    counts, edges = np.array([3, 1]), np.array([0., 1., 2.])
    fname = io.write_histogram(op.join(testdir, 'hist.dat'), counts, edges)
    frame = pd.read_csv(fname, sep=' ')
    assert list(frame.columns) == ['#left', 'right', 'center', 'count']
    assert np.allclose(frame['center'], [0.5, 1.5])

    frame = pd.read_csv(io.write_study_csv(op.join(testdir, 'study.csv'),
                                           study))
    assert list(frame.columns) == ['dx', 'm', 'lambda_analytic',
                                   'lambda_computed', 'abs_err']
    assert len(frame) == len(study.dx) * len(study.lambda_analytic)

    fname = io.write_loglog(op.join(testdir, 'loglog.dat'), study.dx,
                            study.abs_err[:, 0])
    data = np.loadtxt(fname)
    assert data.shape == (2, 2)
    assert np.allclose(data[:, 0], study.dx)

    frame = pd.read_csv(io.write_condition_csv(op.join(testdir, 'cond.csv'),
                                               study))
    assert list(frame.columns) == ['dx', 'm', 'kappa']

    frame = pd.read_csv(io.write_modes_csv(op.join(testdir, 'modes.csv'),
                                           [1, 2], [1. + 0j, 1.01 + 0j]))
    assert list(frame['idx']) == [1, 2]
