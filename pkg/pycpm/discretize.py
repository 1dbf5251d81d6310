# -*- coding: utf-8 -*-
"""
Extension matrices, finite difference Laplacians and CPM operators
"""

import logging

import numpy as np
from scipy import sparse
from scipy.special import comb

from . import utils
from .band import _cube, fd_offsets, footprints
from .errors import ConfigurationError, DomainError
from .utils import ResDict

_LOGGER = logging.getLogger(__name__)

DROP_TOL = 1e-14


class Operators(ResDict):
    """
    Discrete operators assembled on a band

    Attributes
    ----------
    E : (m + k, m) `scipy.sparse.csr_matrix`
        Extension matrix; rows for band nodes come first, then rows for
        outer stencil nodes
    delta_h : (m, m + k) `scipy.sparse.csr_matrix`
        Finite difference Laplacian
    M : (m, m) `scipy.sparse.csr_matrix`
        Stabilized operator
    M_tilde : (m, m) `scipy.sparse.csr_matrix`
        Unstabilized product ``delta_h @ E``
    """
    allowed = ['E', 'delta_h', 'M', 'M_tilde']


def _finalize(mat):
    mat = sparse.csr_matrix(mat)
    mat.sum_duplicates()
    mat.data[np.abs(mat.data) < DROP_TOL] = 0
    mat.eliminate_zeros()
    mat.sort_indices()
    return mat


def _lagrange_weights(s, p):
    """
    Barycentric Lagrange weights at local coordinates `s` in ``[0, p]``

    Parameters
    ----------
    s : (N,) array_like
        Targets measured from the first of ``p + 1`` unit-spaced nodes
    p : int
        Degree

    Returns
    -------
    weights : (N, p + 1) `numpy.ndarray`
    """

    s = np.atleast_1d(np.asarray(s, dtype=float))
    j = np.arange(p + 1)
    w = (-1.) ** j * comb(p, j)
    diff = s[:, None] - j[None]
    hit = np.abs(diff) < 1e-12
    # barycentric form is singular on the nodes themselves
    with np.errstate(divide='ignore', invalid='ignore'):
        terms = w / diff
        weights = terms / terms.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    weights[rows] = hit[rows].astype(float)
    return weights


def barycentric_weights_1d(nodes, target):
    """
    Returns interpolation weights of `target` over equispaced `nodes`

    Parameters
    ----------
    nodes : (p + 1,) array_like
        Strictly increasing, equispaced nodes
    target : float
        Interpolation point

    Returns
    -------
    weights : (p + 1,) `numpy.ndarray`
        Weights reproducing polynomials of degree ``p``; a unit vector when
        `target` is one of the `nodes`
    """

    nodes = np.asarray(nodes, dtype=float)
    if len(nodes) == 1:
        return np.ones(1)
    h = np.diff(nodes)
    if np.any(h <= 0) or not np.allclose(h, h[0], rtol=1e-10, atol=0):
        raise DomainError('Interpolation nodes must be strictly increasing '
                          'and equispaced.')
    return _lagrange_weights((target - nodes[0]) / h[0], len(nodes) - 1)[0]


def _tensor_weights(targets, grid, p):
    """ Footprint multi-indices and tensor product weights of `targets` """
    base, nodes = footprints(targets, grid, p)
    local = grid.grid_units(targets) - base
    cube = _cube(p, grid.dim)
    weights = np.ones((len(targets), len(cube)))
    for axis in range(grid.dim):
        w1 = _lagrange_weights(local[:, axis], p)
        weights *= w1[:, cube[:, axis]]
    return nodes, weights


def _extension_chunk(band, grid, targets, p):
    nodes, weights = _tensor_weights(targets, grid, p)
    cols = band.lookup(nodes.reshape(-1, grid.dim)).reshape(nodes.shape[:2])
    if np.any(cols < 0):
        bad = nodes[cols < 0][0]
        raise DomainError('Interpolation footprint node {} lies outside the '
                          'band.'.format(tuple(bad.tolist())))
    return cols, weights


def extension_row(band, grid, target, p):
    """
    Returns the extension row interpolating band data at `target`

    Parameters
    ----------
    band : :obj:`~.band.Band`
        Band holding the interpolated data
    grid : :obj:`~.band.Grid`
        Grid of the band
    target : (d,) array_like
        Interpolation point
    p : int
        Interpolation degree

    Returns
    -------
    row : (1, m) `scipy.sparse.csr_matrix`

    Raises
    ------
    DomainError
        If the footprint of `target` is not contained in the band
    """

    cols, weights = _extension_chunk(band, grid, np.atleast_2d(target), p)
    row = sparse.csr_matrix((weights[0], (np.zeros(cols.shape[1], int),
                                          cols[0])), shape=(1, band.m))
    return _finalize(row)


def _check_bc(band, bc):
    if not band.open and bc != 'none':
        raise ConfigurationError('Boundary condition {!r} given for a closed '
                                 'surface.'.format(bc))
    if bc == 'none' and (band.ghost.any() or band.outer_ghost.any()):
        raise ConfigurationError('Band has ghost nodes but no boundary '
                                 'condition was given.')


def build_extension_matrix(band, grid, p, bc='none', n_proc=None,
                           chunk_size=4096):
    """
    Assembles the extension matrix `E` of `band`

    Row ``i`` interpolates at the closest point of node ``i``. Ghost rows
    depend on `bc`: 'neumann_homogeneous' interpolates at the mirrored
    closest point, 'dirichlet_homogeneous' does the same with the row
    negated, 'naive_firstorder_neumann' keeps the closest point and
    'naive_firstorder_dirichlet' zeroes the row.

    Parameters
    ----------
    band : :obj:`~.band.Band`
        Band to assemble on
    grid : :obj:`~.band.Grid`
        Grid of the band
    p : int
        Interpolation degree
    bc : str, optional
        Boundary condition kind. Default: 'none'
    n_proc : int, optional
        Number of threads assembling row chunks. Default: None
    chunk_size : int, optional
        Rows per chunk. Default: 4096

    Returns
    -------
    E : (m + k, m) `scipy.sparse.csr_matrix`
        Rows for band nodes, then rows for outer stencil nodes

    Raises
    ------
    ConfigurationError
        If `bc` does not suit the surface
    """

    _check_bc(band, bc)
    targets, active = band.targets(bc, outer=True)
    ghost = np.concatenate([band.ghost, band.outer_ghost])
    # odd reflection across the boundary
    sign = np.where(ghost & (bc == 'dirichlet_homogeneous'), -1., 1.)
    # zeroed rows are left out of the pattern
    rows = np.flatnonzero(active)

    chunks = utils.chunk_slices(len(rows), chunk_size)
    with utils.get_par_func(n_proc, _extension_chunk,
                            prefer='threads') as (par, func):
        parts = par(func(band, grid, targets[rows[sl]], p) for sl in chunks)

    n_rows = band.m + band.k
    if parts:
        cols = np.vstack([c for c, _ in parts])
        vals = np.vstack([w for _, w in parts]) * sign[rows, None]
        ridx = np.repeat(rows, cols.shape[1])
        E = sparse.coo_matrix((vals.ravel(), (ridx, cols.ravel())),
                              shape=(n_rows, band.m))
    else:
        E = sparse.csr_matrix((n_rows, band.m))

    E = _finalize(E)
    _LOGGER.debug('Extension matrix %s with %d entries (bc=%s)', E.shape,
                  E.nnz, bc)
    return E


def fd_weights(q, dx, dim):
    """
    Returns the centre weight and per-distance neighbour weights

    Parameters
    ----------
    q : {2, 4}
        Order of the Laplacian
    dx : float
        Grid spacing
    dim : int
        Embedding dimension

    Returns
    -------
    centre : float
    neighbours : dict
        Weight for neighbours at each distance (in nodes) along an axis
    """

    if q == 2:
        return -2. * dim / dx ** 2, {1: 1. / dx ** 2}
    if q == 4:
        h = 12. * dx ** 2
        return -30. * dim / h, {1: 16. / h, 2: -1. / h}
    raise ConfigurationError('Finite difference order q must be 2 or 4, '
                             'not {}'.format(q))


def build_fd_laplacian(band, grid, q):
    """
    Assembles the finite difference Laplacian over `band`

    Parameters
    ----------
    band : :obj:`~.band.Band`
        Band to assemble on
    grid : :obj:`~.band.Grid`
        Grid of the band
    q : {2, 4}
        Order of the stencil; second order uses ``(1, -2, 1) / dx**2`` and
        fourth order ``(-1, 16, -30, 16, -1) / (12 dx**2)`` along each axis

    Returns
    -------
    delta_h : (m, m + k) `scipy.sparse.csr_matrix`
        Columns for band nodes, then for outer stencil nodes

    Raises
    ------
    DomainError
        If a stencil neighbour is neither a band nor an outer node
    """

    centre, neighbours = fd_weights(q, grid.dx, grid.dim)
    offsets = fd_offsets(q, grid.dim)
    coef = np.array([centre] + [neighbours[int(np.abs(o).sum())]
                                for o in offsets[1:]])

    # every neighbour must be a band or outer node
    nbr = (band.nodes[:, None, :] + offsets[None]).reshape(-1, grid.dim)
    cols = band.lookup(nbr, outer=True)
    if np.any(cols < 0):
        raise DomainError('Stencil neighbour {} is missing from the band.'
                          .format(tuple(nbr[cols < 0][0].tolist())))

    rows = np.repeat(np.arange(band.m), len(offsets))
    vals = np.tile(coef, band.m)
    delta_h = sparse.coo_matrix((vals, (rows, cols)),
                                shape=(band.m, band.m + band.k))
    return _finalize(delta_h)


def _check_conforming(delta_h, E):
    if delta_h.shape[1] != E.shape[0]:
        raise DomainError('Cannot multiply Laplacian of shape {} with '
                          'extension matrix of shape {}'
                          .format(delta_h.shape, E.shape))


def assemble_unstabilized(delta_h, E):
    """
    Returns the unstabilized operator ``delta_h @ E``

    Parameters
    ----------
    delta_h : (m, n) sparse matrix
        Finite difference Laplacian
    E : (n, m) sparse matrix
        Extension matrix

    Returns
    -------
    M_tilde : (m, m) `scipy.sparse.csr_matrix`
    """

    _check_conforming(delta_h, E)
    return _finalize(sparse.csr_matrix(delta_h) @ sparse.csr_matrix(E))


def assemble_stabilized(delta_h, E):
    """
    Returns the stabilized operator ``D + (delta_h - D) @ E``

    ``D`` is the diagonal of `delta_h`; the diagonal entries act on the node
    values themselves instead of on their closest point extension.

    Parameters
    ----------
    delta_h : (m, n) sparse matrix
        Finite difference Laplacian
    E : (n, m) sparse matrix
        Extension matrix

    Returns
    -------
    M : (m, m) `scipy.sparse.csr_matrix`
    """

    _check_conforming(delta_h, E)
    delta_h = sparse.csr_matrix(delta_h)
    diag = delta_h.diagonal()
    # the diagonal acts on the node itself, not on its extension
    off = delta_h - sparse.diags(diag, shape=delta_h.shape)
    M = sparse.diags(diag) + off @ sparse.csr_matrix(E)
    return _finalize(M)


def apply_operator(op, u):
    """
    Applies `op` to the vector `u`

    Parameters
    ----------
    op : (m, n) sparse matrix
    u : (n,) array_like

    Returns
    -------
    v : (m,) `numpy.ndarray`

    Raises
    ------
    DomainError
        If the length of `u` does not match `op`
    """

    u = np.asarray(u)
    if u.ndim != 1 or len(u) != op.shape[1]:
        raise DomainError('Vector of shape {} does not match operator of '
                          'shape {}'.format(u.shape, op.shape))
    return op @ u


def dirichlet_affine_term(band, g, delta_h=None):
    """
    Affine part of the mirrored extension for Dirichlet data `g`

    With non-homogeneous data ghost values extend as ``2 g(cp) - u(cpbar)``;
    the homogeneous part is carried by the extension matrix and this function
    returns the remaining ``2 g(cp)`` contribution.

    Parameters
    ----------
    band : :obj:`~.band.Band`
        Band of an open surface
    g : callable
        Boundary data, mapping (N, d) points to (N,) values
    delta_h : (m, m + k) sparse matrix, optional
        If given, the correction is returned after applying the off-diagonal
        part of `delta_h`. Default: None

    Returns
    -------
    term : `numpy.ndarray`
        Length ``m + k`` extension correction, or length ``m`` operator
        correction if `delta_h` is given
    """

    ghost = np.concatenate([band.ghost, band.outer_ghost])
    cp = np.vstack([band.cp, band.outer_cp])
    term = np.zeros(len(ghost))
    if ghost.any():
        # ghost value is 2g minus the mirrored value
        term[ghost] = 2 * np.asarray(g(cp[ghost]), dtype=float)
    if delta_h is None:
        return term
    delta_h = sparse.csr_matrix(delta_h)
    off = delta_h - sparse.diags(delta_h.diagonal(), shape=delta_h.shape)
    return off @ term


def build_operators(band, n_proc=None):
    """
    Assembles `E`, the Laplacian and both CPM operators on `band`

    Parameters
    ----------
    band : :obj:`~.band.Band`
        Band to assemble on, using its own grid, stencil and boundary
        condition
    n_proc : int, optional
        Number of threads assembling the extension matrix. Default: None

    Returns
    -------
    operators : :obj:`~.discretize.Operators`
    """

    E = build_extension_matrix(band, band.grid, band.spec.p, band.bc,
                               n_proc=n_proc)
    delta_h = build_fd_laplacian(band, band.grid, band.spec.q)
    return Operators(E=E, delta_h=delta_h,
                     M=assemble_stabilized(delta_h, E),
                     M_tilde=assemble_unstabilized(delta_h, E))
