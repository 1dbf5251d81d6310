# -*- coding: utf-8 -*-

import numpy as np
import pytest
from scipy import sparse
from pycpm import eig, geometry
from pycpm.errors import ConfigurationError
from pycpm.harness import discretize_level
from pycpm.structures import FilterReport, SpectralResult


def _result(values):
    values = np.asarray(values, dtype=complex)
    return SpectralResult(eigenvalues=values,
                          eigenvectors=np.eye(len(values), dtype=complex),
                          method='dense', shift=0.,
                          residuals=np.zeros(len(values)))


def test_dense_spectrum(circle_level):
    band, ops = circle_level
    res = eig.dense_spectrum(ops.M)
    assert res.method == 'dense' and res.shift == 0.
    assert len(res.eigenvalues) == band.m
    assert res.eigenvectors.shape == (band.m, band.m)
    assert np.all(np.diff(res.eigenvalues.real) >= 0)
    assert res.residuals.max() <= eig.RESIDUAL_TOL
    # constants are in the kernel of the circle operator
    assert np.abs(res.eigenvalues[0]) < 1e-8
    with pytest.raises(ConfigurationError):
        eig.dense_spectrum(ops.M, max_size=band.m - 1)


def test_arnoldi_matches_dense(circle_level):
    band, ops = circle_level
    dense = eig.dense_spectrum(ops.M).eigenvalues
    res = eig.arnoldi_near_shift(ops.M, 6, shift=-0.5)
    assert res.method == 'arnoldi' and res.shift == -0.5
    assert len(res.eigenvalues) == 6
    assert np.all(np.diff(res.eigenvalues.real) >= 0)
    for value in res.eigenvalues:
        assert np.min(np.abs(dense - value)) < 1e-8 * max(1, abs(value))
    # the six values nearest the shift
    nearest = np.sort(np.abs(dense + 0.5))[:6]
    assert np.allclose(np.sort(np.abs(res.eigenvalues + 0.5)), nearest)
    assert np.isclose(res.eigenvalues[1].real, 1, rtol=0.05)


def test_compute_spectrum(circle_level):
    band, ops = circle_level
    res = eig.compute_spectrum(ops.M, k=4, method='auto',
                               dense_max=band.m - 1)
    assert res.method == 'arnoldi' and len(res.eigenvalues) == 4
    res = eig.compute_spectrum(ops.M, method='auto', dense_max=band.m)
    assert res.method == 'dense'
    with pytest.raises(ConfigurationError):
        eig.compute_spectrum(ops.M, method='qr')
    with pytest.raises(ConfigurationError):
        eig.compute_spectrum(ops.M, k=band.m // 2 + 1, method='arnoldi')
    with pytest.raises(ConfigurationError):
        eig.compute_spectrum(ops.M, k=0, method='arnoldi')


def test_filter_spurious():
    res = _result([0, 1, 1 + 0.1j, 390, 405 + 3j, 1500])
    report = eig.filter_spurious(res, 0.1, 2)
    assert isinstance(report, FilterReport)
    assert res.filter is report
    assert np.isclose(report.cutoff, 400) and np.isclose(report.window, 200)
    assert list(report.kept) == [0, 1, 5]
    assert list(report.discarded_near_cutoff) == [3, 4]
    assert list(report.discarded_complex) == [2]
    reasons = eig.filter_reasons(report, 6)
    assert list(reasons) == ['', '', 'complex', 'near_cutoff',
                             'near_cutoff', '']

    report = eig.filter_spurious(res, 0.1, 2, imag_tol=1., cutoff_window=8.)
    assert list(report.kept) == [0, 1, 2, 3, 5]
    assert list(report.discarded_near_cutoff) == [4]
    assert len(report.discarded_complex) == 0


def test_filter_disjoint():
    res = _result([400 + 50j, 10 + 1j, 2])
    report = eig.filter_spurious(res, 0.1, 2)
    near = set(report.discarded_near_cutoff)
    cplx = set(report.discarded_complex)
    assert near == {0} and cplx == {1}
    assert not near & cplx
    assert sorted(near | cplx | set(report.kept)) == [0, 1, 2]


def test_condition_number():
    op = sparse.diags(np.arange(1., 11.))
    assert np.isclose(eig.condition_number_2norm(op), 10)
    op = sparse.diags(np.arange(1., 301.))
    assert np.isclose(eig.condition_number_2norm(op, tol=1e-10), 300,
                      rtol=1e-4)
    with pytest.warns(UserWarning):
        kappa = eig.condition_number_2norm(sparse.diags([1., 0., 2.]))
    assert np.isinf(kappa)
    with pytest.raises(ConfigurationError):
        eig.condition_number_2norm(np.ones((3, 4)))


def test_condition_number_operator(semicircle_level):
    band, ops = semicircle_level
    kappa = eig.condition_number_2norm(ops.M, tol=1e-10)
    dense = np.linalg.cond(ops.M.toarray())
    assert np.isclose(kappa, dense, rtol=1e-3)


def test_realify():
    vec = (1 + 1j) * np.array([1., -2., 3.])
    real = eig.realify(vec)
    assert np.allclose(np.abs(real), np.sqrt(2) * np.array([1, 2, 3]))
    vecs = np.column_stack([vec, 1j * np.array([0., 1., 0.])])
    real = eig.realify(vecs)
    assert real.shape == (3, 2)
    assert np.allclose(np.abs(real[:, 1]), [0, 1, 0])


def test_sample_eigenfunction(circle_level):
    band, ops = circle_level
    res = eig.compute_spectrum(ops.M, k=4, shift=-0.5, method='arnoldi')
    values = eig.sample_eigenfunction(res, band, band.grid, band.spec.p,
                                      band.cp[:10])
    assert values.shape == (10, 4)
    expected = ops.E[:10] @ res.eigenvectors
    assert np.allclose(values, expected)
    single = eig.sample_eigenfunction(res, band, band.grid, band.spec.p,
                                      band.cp[:10], index=2)
    assert single.shape == (10,)
    assert np.allclose(single, expected[:, 2])


def test_histogram_real():
    res = _result([0, 1, 1 + 0.1j, 790, 805 + 3j, 1500])
    counts, edges = eig.histogram_real(res, bins=3)
    assert counts.sum() == 6 and len(edges) == 4
    assert list(counts) == [3, 2, 1]


def test_cluster_and_select():
    values = np.array([0, 1, 1.0001, 4, 4.00005, 4.0001])
    clusters = eig.cluster_eigenvalues(values, 1e-3)
    assert [list(c) for c in clusters] == [[0], [1, 2], [3, 4, 5]]
    assert eig.cluster_eigenvalues([], 1.) == []

    res = _result(values)
    assert list(eig.select_modes(res)) == list(range(6))
    assert list(eig.select_modes(res, n_modes=2)) == [0, 1]
    assert list(eig.select_modes(res, target=3.9, window=1e-3)) == [3, 4, 5]

    report = FilterReport(kept=np.array([0, 2, 3, 5]))
    assert list(eig.select_modes(res, report, n_modes=3)) == [0, 2, 3]
    assert list(eig.select_modes(res, report, target=4.,
                                 window=1e-3)) == [3, 5]


@pytest.mark.parametrize(('operator', 'count'), [
    ('M', 1),
    ('M_tilde', 6),
])
def test_null_multiplicity(operator, count):
    # only the constant survives near zero once the operator is stabilized
    band, ops = discretize_level(geometry.EggCurve(), 0.1)
    res = eig.dense_spectrum(ops[operator])
    report = eig.filter_spurious(res, 0.1, 2)
    kept = res.eigenvalues[report.kept]
    near_zero = np.sum(np.abs(kept) < 0.05)
    if operator == 'M':
        assert near_zero == count
    else:
        assert near_zero >= count


def _unstabilized_mode_residual(dx):
    band, ops = discretize_level(geometry.Circle(), dx)
    res = eig.arnoldi_near_shift(ops.M_tilde, 2, shift=0.9)
    vecs = np.column_stack([eig.realify(v) for v in res.eigenvectors.T])

    # -delta_h E applied to the extended cos and sin modes
    theta = np.arctan2(band.cp[:, 1], band.cp[:, 0])
    surface = np.column_stack([np.cos(theta), np.sin(theta)])
    basis = -(ops.delta_h @ (ops.E @ surface))
    coef, *_ = np.linalg.lstsq(basis, vecs, rcond=None)
    return (np.linalg.norm(vecs - basis @ coef, axis=0)
            / np.linalg.norm(vecs, axis=0)).max()


def test_unstabilized_eigenvectors():
    coarse = _unstabilized_mode_residual(0.1)
    fine = _unstabilized_mode_residual(0.05)
    assert fine < coarse / 1.5
