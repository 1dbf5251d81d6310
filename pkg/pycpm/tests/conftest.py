# -*- coding: utf-8 -*-

import pytest
from pycpm import geometry
from pycpm.harness import discretize_level


@pytest.fixture(scope='session')
def testdir(tmpdir_factory):
    data_dir = tmpdir_factory.mktemp('data')
    return str(data_dir)


@pytest.fixture(scope='session')
def circle_level():
    return discretize_level(geometry.Circle(), 0.1, p=3, q=2)


@pytest.fixture(scope='session')
def semicircle_level():
    return discretize_level(geometry.Semicircle(), 1 / 16, p=3, q=2,
                            bc='dirichlet_homogeneous')


@pytest.fixture(scope='session')
def sphere_level():
    return discretize_level(geometry.Sphere(), 0.2, p=3, q=2)


@pytest.fixture(scope='session')
def cpm_inputs():
    return dict(surface='circle', radius=1.0, dx_list=[0.2, 0.1],
                q=2, p=3, bc='none', operator='stabilized', k_eigs=6,
                shift=-0.5, solver='arnoldi', dense_max=100, imag_tol=1e-6,
                n_track=3, hist_bins=20, verbose=False,
                outputs=['csv', 'dat'])
