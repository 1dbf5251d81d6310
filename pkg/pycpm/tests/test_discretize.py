# -*- coding: utf-8 -*-

import numpy as np
import pytest
from scipy import sparse
from pycpm import discretize, geometry
from pycpm.band import Band, Grid, StencilSpec, build_band, fd_offsets
from pycpm.eig import compute_spectrum
from pycpm.errors import ConfigurationError, DomainError
from pycpm.harness import discretize_level, observed_order

rs = np.random.RandomState(1234)


def test_barycentric_weights_1d():
    nodes = 0.3 + 0.1 * np.arange(4)
    target = 0.47
    weights = discretize.barycentric_weights_1d(nodes, target)
    for power in range(4):
        assert np.isclose(weights @ nodes ** power, target ** power)
    assert np.isclose(weights.sum(), 1)

    weights = discretize.barycentric_weights_1d(nodes, nodes[2])
    assert np.all(weights == [0, 0, 1, 0])
    assert np.all(discretize.barycentric_weights_1d([2.], 5.) == [1])
    with pytest.raises(DomainError):
        discretize.barycentric_weights_1d([0., 0.1, 0.3], 0.2)
    with pytest.raises(DomainError):
        discretize.barycentric_weights_1d([0.2, 0.1, 0.], 0.1)


@pytest.mark.parametrize('p', [1, 2, 3, 5])
def test_lagrange_weights(p):
    s = rs.uniform(0, p, size=20)
    weights = discretize._lagrange_weights(s, p)
    assert weights.shape == (20, p + 1)
    assert np.allclose(weights.sum(1), 1)
    assert np.allclose(weights @ np.arange(p + 1) ** p, s ** p)


def _poly(X, p):
    x, y = X[:, 0], X[:, 1]
    return 1 + x - 2 * y + x ** (p - 1) * y + (x * y) ** p


def test_extension_exact(circle_level):
    band, ops = circle_level
    p = band.spec.p
    values = _poly(band.points(), p)
    # rows of E reproduce tensor polynomials of degree p at closest points
    assert np.allclose(ops.E[:band.m] @ values, _poly(band.cp, p))
    for target in band.cp[:5]:
        row = discretize.extension_row(band, band.grid, target, p)
        assert row.shape == (1, band.m)
        assert np.isclose((row @ values)[0], _poly(target[None], p)[0])
    with pytest.raises(DomainError):
        discretize.extension_row(band, band.grid, [5., 5.], p)


def test_extension_rows(circle_level, semicircle_level):
    band, ops = circle_level
    assert ops.E.shape == (band.m + band.k, band.m)
    assert np.allclose(np.asarray(ops.E.sum(1)).ravel(), 1)

    band, ops = semicircle_level
    ghost = np.concatenate([band.ghost, band.outer_ghost])
    sums = np.asarray(ops.E.sum(1)).ravel()
    assert np.allclose(sums[~ghost], 1)
    assert np.allclose(sums[ghost], -1)


def test_extension_bc(semicircle_level):
    band, ops = semicircle_level
    ghost = np.concatenate([band.ghost, band.outer_ghost])
    E = discretize.build_extension_matrix(band, band.grid, band.spec.p,
                                          'naive_firstorder_dirichlet')
    assert E[np.flatnonzero(ghost)].nnz == 0
    E = discretize.build_extension_matrix(band, band.grid, band.spec.p,
                                          'naive_firstorder_neumann')
    assert np.allclose(np.asarray(E.sum(1)).ravel(), 1)
    E = discretize.build_extension_matrix(band, band.grid, band.spec.p,
                                          'neumann_homogeneous')
    assert abs(abs(E) - abs(ops.E)).max() < 1e-14
    with pytest.raises(ConfigurationError):
        discretize.build_extension_matrix(band, band.grid, band.spec.p,
                                          'none')


def test_extension_parallel(semicircle_level):
    band, ops = semicircle_level
    E = discretize.build_extension_matrix(band, band.grid, band.spec.p,
                                          band.bc, n_proc=2, chunk_size=50)
    assert (E != ops.E).nnz == 0


def test_constants_in_kernel(circle_level, sphere_level):
    for band, ops in (circle_level, sphere_level):
        ones = np.ones(band.m)
        assert np.allclose(ops.M @ ones, 0, atol=1e-8)
        assert np.allclose(ops.M_tilde @ ones, 0, atol=1e-8)


def test_stabilization_identity(circle_level, semicircle_level):
    for band, ops in (circle_level, semicircle_level):
        diag = ops.delta_h.diagonal()
        expected = sparse.diags(diag) @ (sparse.identity(band.m)
                                         - ops.E[:band.m])
        assert abs(ops.M - ops.M_tilde - expected).max() < 1e-10


def test_fd_weights():
    centre, nbrs = discretize.fd_weights(2, 0.5, 2)
    assert centre == -16 and nbrs == {1: 4.}
    centre, nbrs = discretize.fd_weights(4, 1., 3)
    assert np.isclose(centre, -7.5)
    assert np.isclose(nbrs[1], 4 / 3) and np.isclose(nbrs[2], -1 / 12)
    with pytest.raises(ConfigurationError):
        discretize.fd_weights(6, 1., 2)


def _block_band(grid, q, lo=0, hi=4):
    g = np.arange(lo, hi + 1)
    nodes = np.column_stack([a.ravel() for a in np.meshgrid(g, g)])
    offsets = fd_offsets(q, 2)
    nbr = np.unique((nodes[:, None] + offsets[None]).reshape(-1, 2), axis=0)
    inner = (nbr >= lo).all(1) & (nbr <= hi).all(1)
    return Band.from_nodes(grid, StencilSpec(p=5, q=q), nodes, nbr[~inner])


@pytest.mark.parametrize(('q', 'func', 'lap'), [
    (2, lambda X: X[:, 0] ** 2 + 3 * X[:, 1] ** 2, lambda X: 8.),
    (4, lambda X: X[:, 0] ** 4 - X[:, 1] ** 3,
     lambda X: 12 * X[:, 0] ** 2 - 6 * X[:, 1])
])
def test_fd_laplacian(q, func, lap):
    grid = Grid(0.25, origin=[0.1, -0.2])
    band = _block_band(grid, q)
    delta_h = discretize.build_fd_laplacian(band, grid, q)
    assert delta_h.shape == (band.m, band.m + band.k)
    assert delta_h.getnnz(axis=1).max() == 1 + 2 * q
    approx = delta_h @ func(band.points(outer=True))
    assert np.allclose(approx, lap(band.points()))

    partial = Band.from_nodes(grid, band.spec, band.nodes)
    with pytest.raises(DomainError):
        discretize.build_fd_laplacian(partial, grid, q)


def test_assembly_errors(circle_level):
    band, ops = circle_level
    with pytest.raises(DomainError):
        discretize.assemble_stabilized(ops.delta_h, ops.E[:band.m])
    with pytest.raises(DomainError):
        discretize.assemble_unstabilized(ops.delta_h, ops.E.T)
    with pytest.raises(DomainError):
        discretize.apply_operator(ops.M, np.ones(band.m + 1))
    assert discretize.apply_operator(ops.M, np.ones(band.m)).shape == \
        (band.m,)


def test_dirichlet_affine_term(semicircle_level):
    band, ops = semicircle_level
    ghost = np.concatenate([band.ghost, band.outer_ghost])
    term = discretize.dirichlet_affine_term(
        band, lambda X: np.ones(len(X)))
    assert term.shape == (band.m + band.k,)
    assert np.all(term[ghost] == 2) and np.all(term[~ghost] == 0)

    # homogeneous part plus affine part extends the data g = 1 exactly
    ones = np.ones(band.m)
    assert np.allclose((ops.E @ ones + term)[ghost], 1)

    correction = discretize.dirichlet_affine_term(
        band, lambda X: np.ones(len(X)), delta_h=ops.delta_h)
    assert correction.shape == (band.m,)
    assert np.allclose(ops.M @ ones + correction, 0, atol=1e-8)


@pytest.fixture(scope='module')
def l_shape_level():
    surface = geometry.LShape()
    grid = Grid(0.25)
    band = build_band(surface, grid, StencilSpec(p=3, q=2),
                      bc='dirichlet_homogeneous')
    return surface, band, discretize.build_operators(band)


def _oracle(surface, band):
    dx = band.grid.dx
    nodes = band.all_nodes()
    inside = surface.contains(band.grid.coords(nodes))
    cp, _ = surface.closest_points(band.grid.coords(nodes))
    mirror = np.rint(band.grid.grid_units(2 * cp - band.grid.coords(nodes)))
    column = np.where(inside, band.lookup(nodes),
                      band.lookup(mirror.astype(int)))
    sign = np.where(inside, 1., -1.)
    assert np.all(column >= 0)

    oracle = np.diag(np.full(band.m, -4. / dx ** 2))
    offsets = fd_offsets(2, 2)[1:]
    nbr = (band.nodes[:, None, :] + offsets[None]).reshape(-1, 2)
    j = band.lookup(nbr, outer=True)
    rows = np.repeat(np.arange(band.m), len(offsets))
    np.add.at(oracle, (rows, column[j]), sign[j] / dx ** 2)
    return oracle


def test_l_shape_oracle(l_shape_level):
    surface, band, ops = l_shape_level
    assert band.n_ghost > 0
    oracle = _oracle(surface, band)
    assert np.abs(ops.M.toarray() - oracle).max() <= 1e-12

    computed = compute_spectrum(ops.M, method='dense', dense_max=band.m)
    reference = compute_spectrum(sparse.csr_matrix(oracle), method='dense',
                                 dense_max=band.m)
    lam, ref = computed.eigenvalues[:15], reference.eigenvalues[:15]
    assert np.all(np.abs(lam - ref) <= 1e-8 * np.abs(ref))


@pytest.mark.parametrize('n', [1, 2])
def test_circle_consistency(n):
    # -M applied to cos(n theta) approaches n**2 cos(n theta) on the circle
    dxs = np.array([0.1, 0.05, 0.025])
    errors = []
    for dx in dxs:
        band, ops = discretize_level(geometry.Circle(), dx, p=3, q=2)
        u = np.cos(n * np.arctan2(band.cp[:, 1], band.cp[:, 0]))
        on_circle = ops.E[:band.m] @ -(ops.M @ u)
        errors.append(np.abs(on_circle - n ** 2 * u).max())
    assert 1.6 <= observed_order(errors, dxs) <= 2.6
