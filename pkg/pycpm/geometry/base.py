# -*- coding: utf-8 -*-
"""
Closest point queries shared by every surface representation
"""

import numpy as np
from sklearn.utils.validation import check_array

from ..errors import DomainError
from ..structures import CpResult

# coarsest grid spacing of the packaged studies
DEFAULT_DX = 0.25


class Surface():
    """
    Base class for closest point representations of a surface

    Subclasses implement :meth:`closest_points`, returning closest points and
    boundary flags for a batch of queries. Every surface is immutable once
    constructed, so queries can be issued concurrently.

    Attributes
    ----------
    kind : str
        Registry name of the surface
    dim : int
        Dimension of the embedding space
    open : bool
        Whether the surface has a boundary
    """

    kind = None
    dim = 2
    open = False

    def closest_points(self, X):
        """
        Finds closest points on the surface for every row of `X`

        Parameters
        ----------
        X : (N, d) array_like
            Query points

        Returns
        -------
        points : (N, d) `numpy.ndarray`
            Closest surface points
        on_boundary : (N,) `numpy.ndarray`
            Whether each closest point lies on the surface boundary
        """
        raise NotImplementedError

    def bounds(self):
        """ Returns lower and upper corners of the surface bounding box """
        pts = self.sample_points(2000)
        return pts.min(axis=0), pts.max(axis=0)

    def sample_points(self, n):
        """
        Returns approximately `n` points lying on the surface

        Parameters
        ----------
        n : int
            Requested number of points

        Returns
        -------
        points : (n, d) `numpy.ndarray`
        """
        raise NotImplementedError

    def reference(self, bc='none'):
        """
        Returns the analytic spectrum case describing this surface

        Parameters
        ----------
        bc : str, optional
            Boundary condition kind. Default: 'none'

        Returns
        -------
        case : tuple of (str, dict) or None
            Case name and parameters for :func:`pycpm.harness.
            analytic_spectrum`, or None if no closed form is known
        """
        return None

    @property
    def analytic_spectrum_available(self):
        return self.reference(_default_bc(self)) is not None

    def analytic_spectrum(self, bc='none', n_values=50):
        """
        Returns the analytic Laplace-Beltrami spectrum of the surface

        Parameters
        ----------
        bc : str, optional
            Boundary condition kind. Default: 'none'
        n_values : int, optional
            Number of distinct eigenvalues to generate. Default: 50

        Returns
        -------
        spectrum : :obj:`~.structures.AnalyticSpectrum` or None
        """
        from ..harness import analytic_spectrum

        case = self.reference(bc)
        if case is None:
            return None
        name, params = case
        return analytic_spectrum(name, n_values=n_values, **params)

    def __repr__(self):
        return '{}(kind={!r}, dim={}, open={})'.format(
            self.__class__.__name__, self.kind, self.dim, self.open)


def _default_bc(surface):
    return 'dirichlet_homogeneous' if surface.open else 'none'


def bc_family(bc):
    """
    Returns 'dirichlet', 'neumann' or None for boundary condition kind `bc`
    """
    if bc is None or bc == 'none':
        return None
    return 'dirichlet' if 'dirichlet' in bc else 'neumann'


def _as_queries(surface, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[-1] != surface.dim:
        raise DomainError('Query points must have {} coordinates, not {}'
                          .format(surface.dim, X.shape[-1]))
    try:
        X = check_array(X, dtype=float, ensure_min_samples=0)
    except ValueError as err:
        raise DomainError('Invalid query points: {}'.format(err))
    return X


def stencil_radius(p, q, dim):
    """
    Returns the radius in grid units of the nodes a band node may reach

    Parameters
    ----------
    p, q : int
        Interpolation degree and finite difference order
    dim : int
        Embedding dimension

    Returns
    -------
    radius : float
    """

    half = (p + 1) / 2
    return np.sqrt((dim - 1) * half ** 2 + (q / 2 + half) ** 2)


def _check_distance(distance, max_distance):
    if max_distance is not None and np.any(distance > max_distance):
        raise DomainError('Query lies {:.3g} from the surface, beyond the '
                          'supported neighbourhood of {:.3g}'
                          .format(np.max(distance), max_distance))


def _neighbourhood(surface, dx, p, q, max_distance):
    # twice the band radius at spacing dx
    if max_distance is not None:
        return max_distance
    return 2 * stencil_radius(p, q, surface.dim) * dx


def closest_point(surface, x, dx=DEFAULT_DX, p=3, q=2, max_distance=None):
    """
    Returns the closest point on `surface` to the point `x`

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to query
    x : (d,) array_like
        Query point
    dx : float, optional
        Grid spacing the query belongs to. Default: 0.25
    p, q : int, optional
        Interpolation degree and finite difference order of that grid.
        Default: 3, 2
    max_distance : float, optional
        Largest accepted distance between `x` and the surface. Default:
        twice the band radius, ``2 * stencil_radius(p, q, d) * dx``

    Returns
    -------
    result : :obj:`~.structures.CpResult`

    Raises
    ------
    DomainError
        If `x` is farther than `max_distance` from the surface
    """

    X = _as_queries(surface, x)
    points, onb = surface.closest_points(X)
    dist = np.linalg.norm(X - points, axis=1)
    _check_distance(dist, _neighbourhood(surface, dx, p, q, max_distance))

    return CpResult(point=points[0], distance=float(dist[0]),
                    on_boundary=bool(onb[0]) and surface.open)


def cp_bar_points(surface, X, tol=1e-8):
    """
    Vectorized mirrored closest points ``cp(2 cp(x) - x)``

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to query
    X : (N, d) array_like
        Query points
    tol : float, optional
        Distance between closest and mirrored closest point above which a
        query is a ghost. Default: 1e-8

    Returns
    -------
    cp : (N, d) `numpy.ndarray`
        Closest points
    cp_boundary : (N,) `numpy.ndarray`
        Whether each closest point lies on the boundary
    cpbar : (N, d) `numpy.ndarray`
        Mirrored closest points; identical to `cp` for non-ghost queries
    cpbar_boundary : (N,) `numpy.ndarray`
        Whether each mirrored closest point lies on the boundary
    ghost : (N,) `numpy.ndarray`
        Whether each query is a ghost point
    """

    X = _as_queries(surface, X)
    cp, onb = surface.closest_points(X)
    onb = np.asarray(onb, dtype=bool) & surface.open
    if not surface.open:
        return cp, onb, cp.copy(), onb.copy(), np.zeros(len(X), dtype=bool)

    # reflect through the closest point
    cpbar, onb_bar = surface.closest_points(2 * cp - X)
    onb_bar = np.asarray(onb_bar, dtype=bool)
    ghost = np.linalg.norm(cp - cpbar, axis=1) > tol
    cpbar[~ghost] = cp[~ghost]
    onb_bar[~ghost] = onb[~ghost]

    return cp, onb, cpbar, onb_bar, ghost


def cp_bar(surface, x, dx=DEFAULT_DX, p=3, q=2, tol=None, max_distance=None):
    """
    Returns the mirrored closest point ``cp(2 cp(x) - x)`` of `x`

    For queries that are not ghost points the result equals
    :func:`closest_point` exactly.

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to query
    x : (d,) array_like
        Query point
    dx : float, optional
        Grid spacing the query belongs to. Default: 0.25
    p, q : int, optional
        Interpolation degree and finite difference order. Default: 3, 2
    tol : float, optional
        Ghost point tolerance. Default: ``1e-8 * dx``
    max_distance : float, optional
        Largest accepted distance between `x` and the surface. Default:
        twice the band radius

    Returns
    -------
    result : :obj:`~.structures.CpResult`
        Mirrored closest point, with `distance` measured from `x`
    """

    X = _as_queries(surface, x)
    tol = 1e-8 * dx if tol is None else tol
    cp, _, cpbar, onb_bar, _ = cp_bar_points(surface, X, tol=tol)
    _check_distance(np.linalg.norm(X - cp, axis=1),
                    _neighbourhood(surface, dx, p, q, max_distance))

    return CpResult(point=cpbar[0],
                    distance=float(np.linalg.norm(X[0] - cpbar[0])),
                    on_boundary=bool(onb_bar[0]))


def is_ghost(surface, x, dx=DEFAULT_DX, tol=None):
    """
    Returns whether `x` is a ghost point of `surface`

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to query
    x : (d,) array_like
        Query point
    dx : float, optional
        Grid spacing the query belongs to. Default: 0.25
    tol : float, optional
        Ghost point tolerance. Default: ``1e-8 * dx``

    Returns
    -------
    ghost : bool
    """

    tol = 1e-8 * dx if tol is None else tol
    if tol <= 0:
        raise DomainError('Ghost tolerance must be positive, not {}'
                          .format(tol))
    ghost = cp_bar_points(surface, _as_queries(surface, x), tol=tol)[-1]
    return bool(ghost[0])


def cp_parametric(param, x, **kwargs):
    """
    Sample-then-Newton closest point on a parametric curve or surface

    Parameters
    ----------
    param : :obj:`~.geometry.curves.ParametricCurve` or
            :obj:`~.geometry.parametric.ParametricSurface`
        Parametric form to minimize the squared distance over
    x : (d,) array_like
        Query point
    kwargs
        Grid parameters passed to :func:`closest_point`

    Returns
    -------
    result : :obj:`~.structures.CpResult`
    """
    return closest_point(param, x, **kwargs)


def cp_trimesh(mesh, x, **kwargs):
    """
    Exact closest point on a triangulated surface

    Parameters
    ----------
    mesh : :obj:`~.geometry.trimesh.TriMesh`
        Triangle mesh
    x : (3,) array_like
        Query point
    kwargs
        Grid parameters passed to :func:`closest_point`

    Returns
    -------
    result : :obj:`~.structures.CpResult`
    """
    return closest_point(mesh, x, **kwargs)
