# -*- coding: utf-8 -*-

import numpy as np
import pytest
from pycpm import harness
from pycpm.errors import ConfigurationError, DomainError
from pycpm.structures import CPMInputs, StudyReport


@pytest.mark.parametrize(('case', 'params', 'values', 'mult'), [
    ('circle', dict(radius=1.), [0, 1, 4], [1, 2, 2]),
    ('circle', dict(radius=2.), [0, 0.25, 1], [1, 2, 2]),
    ('closed_curve', dict(length=2 * np.pi), [0, 1, 4], [1, 2, 2]),
    ('interval_dirichlet', dict(length=np.pi), [1, 4, 9], [1, 1, 1]),
    ('interval_neumann', dict(length=np.pi), [0, 1, 4], [1, 1, 1]),
    ('hemisphere_neumann', dict(radius=1.), [0, 2, 6], [1, 2, 3]),
    ('hemisphere_dirichlet', dict(radius=1.), [2, 6, 12], [1, 2, 3]),
    ('sphere', dict(radius=1.), [0, 2, 6], [1, 3, 5]),
])
def test_analytic_spectrum(case, params, values, mult):
    spectrum = harness.analytic_spectrum(case, n_values=10, **params)
    assert spectrum.multiplets.shape == (10, 2)
    assert np.allclose(spectrum.multiplets[:3, 0], values)
    assert np.all(spectrum.multiplets[:3, 1] == mult)
    assert spectrum.provenance.startswith(case)


def test_analytic_spectrum_helpers():
    sphere = harness.analytic_spectrum('sphere', n_values=5)
    assert np.allclose(sphere.expanded(5), [0, 2, 2, 2, 6])
    assert len(sphere.expanded()) == 25
    assert np.allclose(sphere.tracked(3), [2, 6, 12])
    hemisphere = harness.analytic_spectrum('hemisphere_neumann',
                                           n_values=6)
    # the fifth nonzero level is a five-fold multiplet
    assert np.allclose(hemisphere.multiplets[4], [20, 5])
    with pytest.raises(ConfigurationError):
        harness.analytic_spectrum('torus')


def test_arclength():
    from pycpm.geometry import Circle, CosineCurve, Semicircle
    assert np.isclose(harness.arclength(Circle(radius=2.)), 4 * np.pi)
    assert np.isclose(harness.arclength(Semicircle()), np.pi)
    # midpoint rule for (t, cos t) over [0.25, 4]
    h = 3.75 / 20000
    t = 0.25 + h * (np.arange(20000) + 0.5)
    length = h * np.sqrt(1 + np.sin(t) ** 2).sum()
    assert np.isclose(harness.arclength(CosineCurve()), length, rtol=1e-6)


def test_match_eigenvalues():
    circle = harness.analytic_spectrum('circle', n_values=10)
    pairs = harness.match_eigenvalues([4.1, 0.01, 0.9, 1.1], circle)
    assert pairs.shape == (4, 3)
    assert np.allclose(pairs[:, 0], [0, 1, 1, 4])
    assert np.allclose(pairs[:, 1], [0.01, 0.9, 1.1, 4.1])
    assert np.allclose(pairs[:, 2], [0.01, 0.1, 0.1, 0.1])

    with pytest.warns(UserWarning):
        pairs = harness.match_eigenvalues([0.01, 0.9], circle, count=4)
    assert np.all(np.isnan(pairs[2:, 1:]))
    assert np.allclose(pairs[:, 0], [0, 1, 1, 4])

    short = harness.analytic_spectrum('circle', n_values=2)
    with pytest.raises(ConfigurationError):
        harness.match_eigenvalues(np.arange(5.), short)


def test_observed_order():
    dxs = np.array([0.1, 0.05, 0.025])
    assert np.isclose(harness.observed_order(3 * dxs ** 2, dxs), 2)
    errors = np.column_stack([dxs ** 2, 0.5 * dxs ** 4, np.zeros(3),
                              [0.01, np.nan, 0.000625]])
    orders = harness.observed_order(errors, dxs)
    assert np.allclose(orders[[0, 1, 3]], [2, 4, 2])
    assert np.isinf(orders[2])
    # a column missing one level is left out once three are required
    orders = harness.observed_order(errors, dxs, min_levels=3)
    assert np.allclose(orders[:2], [2, 4]) and np.isnan(orders[3])

    # a missing coarse level leaves three levels to fit
    dxs = np.array([0.2, 0.1, 0.05, 0.025])
    errors = np.column_stack([dxs ** 2, dxs ** 2])
    errors[0, 1] = np.nan
    assert np.allclose(harness.observed_order(errors, dxs, min_levels=3), 2)
    with pytest.raises(ConfigurationError):
        harness.observed_order([0.1], [0.1])
    with pytest.raises(ConfigurationError):
        harness.observed_order([0.1, 0.2, 0.3], [0.1, 0.05])


def test_embedded_circle_eigenfunction():
    theta = np.linspace(0, 2 * np.pi, 9)
    values = harness.embedded_circle_eigenfunction(4., 1., 0.1, 1., theta)
    assert np.allclose(values, np.cos(2 * theta))
    # off the circle the amplitude follows the regularized radial profile
    value = harness.embedded_circle_eigenfunction(1., 1., 0.1, 2., 0.)
    assert np.isclose(value, (4 - 0.01 / 4) / (4 - 0.01))
    with pytest.raises(DomainError):
        harness.embedded_circle_eigenfunction(4., 1., 1., 1., theta)
    with pytest.raises(DomainError):
        harness.embedded_circle_eigenfunction(1., 1., 0.1, 0., theta)


def test_circle_mode_agreement():
    error = harness.circle_mode_agreement(0.1)
    assert 0 <= error < 0.05


def test_solve_level(cpm_inputs):
    inputs = CPMInputs(**cpm_inputs)
    band, ops, res = harness.solve_level(inputs, dx=0.1)
    assert res.operator == 'stabilized' and res.method == 'arnoldi'
    assert len(res.eigenvalues) == inputs.k_eigs
    assert len(res.filter.kept) > 0
    assert ops.M.shape == (band.m, band.m)

    band, ops, res = harness.solve_level(inputs, operator='unstabilized')
    assert res.operator == 'unstabilized'


def test_run_study(cpm_inputs):
    params = dict(cpm_inputs, k_eigs=8, dx_list=[0.2, 0.1, 0.05],
                  condition=True)
    report = harness.run_study(**params)
    assert isinstance(report, StudyReport)
    assert np.allclose(report.dx, [0.2, 0.1, 0.05])
    assert np.all(report.m[1:] > report.m[:-1])
    assert np.allclose(report.lambda_analytic, [1, 4, 9])
    assert report.lambda_computed.shape == (3, 3)
    assert not report.failed.any()
    assert np.all(report.abs_err[-1] < 0.05 * report.lambda_analytic)
    assert np.all(report.orders > 1.5)
    assert np.all(np.isfinite(report.kappa))
    assert report.inputs.surface == 'circle'


def test_run_study_levels(cpm_inputs):
    params = dict(cpm_inputs, k_eigs=8, dx_list=[0.5, 0.05], max_nodes=300)
    with pytest.warns(UserWarning):
        report = harness.run_study(**params)
    assert list(report.failed) == [False, True]
    assert np.all(np.isnan(report.abs_err[1]))
    assert np.all(np.isnan(report.orders))

    report = harness.run_study(CPMInputs(**dict(params, condition=True)),
                               spectra=False)
    assert report.lambda_analytic.size == 0
    assert np.isfinite(report.kappa[0]) and np.isnan(report.kappa[1])

    with pytest.raises(ConfigurationError):
        harness.run_study(**dict(params, k_eigs=500))
