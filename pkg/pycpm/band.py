# -*- coding: utf-8 -*-
"""
Computational bands of grid nodes enveloping a surface
"""

import logging
import warnings

import numpy as np

from . import utils
from .errors import ConfigurationError, DomainError, ResourceError
from .geometry import cp_bar_points, stencil_radius
from .structures import BC_KINDS, BandSummary
from .utils import ResDict

_LOGGER = logging.getLogger(__name__)

_KEY_SHIFT = 2 ** 19
_KEY_BASE = 2 ** 20


class Grid(ResDict):
    """
    Uniform Cartesian grid

    Attributes
    ----------
    dx : float
        Grid spacing
    origin : (d,) `numpy.ndarray`
        Coordinates of the node with multi-index zero
    dim : int
        Embedding dimension
    """
    allowed = ['dx', 'origin', 'dim']

    def __init__(self, dx, dim=2, origin=None):
        dx = float(dx)
        if not dx > 0:
            raise ConfigurationError('Grid spacing must be positive, not {}'
                                     .format(dx))
        origin = np.zeros(dim) if origin is None else origin
        origin = np.asarray(origin, dtype=float)
        if origin.shape != (int(dim),):
            raise ConfigurationError('Grid origin must have {} coordinates'
                                     .format(dim))
        super().__init__(dx=dx, origin=origin, dim=int(dim))

    def coords(self, idx):
        """ Returns coordinates of integer multi-indices `idx` """
        return self.origin + np.asarray(idx, dtype=float) * self.dx

    def grid_units(self, x):
        """ Returns the coordinates `x` measured in grid units """
        return (np.asarray(x, dtype=float) - self.origin) / self.dx


class StencilSpec(ResDict):
    """
    Interpolation degree and finite difference order

    Attributes
    ----------
    p : int
        Degree of the barycentric Lagrange interpolation
    q : {2, 4}
        Order of the finite difference Laplacian
    """
    allowed = ['p', 'q']

    def __init__(self, p=3, q=2):
        p, q = int(p), int(q)
        if p < 1:
            raise ConfigurationError('Interpolation degree p must be at '
                                     'least 1, not {}'.format(p))
        if q not in (2, 4):
            raise ConfigurationError('Finite difference order q must be 2 '
                                     'or 4, not {}'.format(q))
        if p < q + 1:
            warnings.warn('Interpolation degree p={} is below q + 1 = {}; '
                          'the extension will limit the overall accuracy.'
                          .format(p, q + 1), stacklevel=2)
        super().__init__(p=p, q=q)


def node_keys(idx):
    """
    Encodes integer multi-indices as sortable int64 keys

    Keys order lexicographically like the multi-indices they encode.

    Parameters
    ----------
    idx : (N, d) array_like
        Multi-indices with components in ``[-2**19, 2**19)``

    Returns
    -------
    keys : (N,) `numpy.ndarray`
    """

    idx = np.atleast_2d(np.asarray(idx, dtype=np.int64)) + _KEY_SHIFT
    keys = np.zeros(len(idx), dtype=np.int64)
    for col in idx.T:
        keys = keys * _KEY_BASE + col
    return keys


def fd_offsets(q, dim):
    """
    Returns the finite difference stencil offsets, centre first

    Parameters
    ----------
    q : {2, 4}
        Order of the stencil
    dim : int
        Embedding dimension

    Returns
    -------
    offsets : (1 + q * dim, dim) `numpy.ndarray`
    """

    reach = range(1, q // 2 + 1)
    offsets = [np.zeros(dim, dtype=np.int64)]
    for axis in range(dim):
        for s in reach:
            for sign in (-1, 1):
                o = np.zeros(dim, dtype=np.int64)
                o[axis] = sign * s
                offsets.append(o)
    return np.array(offsets)


def band_radius(spec, dim):
    """
    Returns the seed bandwidth in grid units

    Parameters
    ----------
    spec : :obj:`~.band.StencilSpec`
        Stencil orders
    dim : int
        Embedding dimension

    Returns
    -------
    radius : float
    """

    return stencil_radius(spec.p, spec.q, dim)


def _footprint_base(s, p):
    s = np.asarray(s, dtype=float)
    # snap targets sitting on a node up to round-off
    r = np.round(s)
    s = np.where(np.abs(s - r) < 1e-12, r, s)
    floor = np.floor(s).astype(np.int64)
    # odd degree: target in the central cell
    if p % 2:
        return floor - (p - 1) // 2
    return floor - p // 2 + 1


def _cube(p, dim):
    axes = np.indices((p + 1,) * dim).reshape(dim, -1).T
    return axes.astype(np.int64)


def footprints(points, grid, p):
    """
    Vectorized interpolation footprints of `points`

    Parameters
    ----------
    points : (N, d) array_like
        Interpolation targets
    grid : :obj:`~.band.Grid`
        Grid the footprints live on
    p : int
        Interpolation degree

    Returns
    -------
    base : (N, d) `numpy.ndarray`
        Lowest multi-index of each footprint
    nodes : (N, (p + 1)**d, d) `numpy.ndarray`
        Multi-indices of each footprint, last axis varying fastest
    """

    base = _footprint_base(grid.grid_units(np.atleast_2d(points)), p)
    return base, base[:, None, :] + _cube(p, grid.dim)[None]


def interp_footprint(cp_point, grid, p):
    """
    Returns the ``(p + 1)**d`` grid nodes interpolating at `cp_point`

    For odd `p` the point lies in the central cell of the footprint; for even
    `p` the footprint starts ``p / 2 - 1`` cells below the enclosing cell.
    Coordinates within 1e-12 grid units of a node count as on the node.

    Parameters
    ----------
    cp_point : (d,) array_like
        Interpolation target
    grid : :obj:`~.band.Grid`
        Grid the footprint lives on
    p : int
        Interpolation degree

    Returns
    -------
    nodes : list of tuple
        Multi-indices of the footprint in lexicographic order
    """

    _, nodes = footprints(np.atleast_2d(cp_point), grid, p)
    return [tuple(int(i) for i in n) for n in nodes[0]]


def target_points(cp, cpbar, ghost, is_open, bc):
    """
    Returns the extension target of every node and whether it is active

    Parameters
    ----------
    cp, cpbar : (N, d) `numpy.ndarray`
        Closest and mirrored closest points
    ghost : (N,) `numpy.ndarray`
        Ghost mask
    is_open : bool
        Whether the surface has a boundary
    bc : str
        Boundary condition kind

    Returns
    -------
    targets : (N, d) `numpy.ndarray`
    active : (N,) `numpy.ndarray`
        False for nodes whose extension row is identically zero
    """

    active = np.ones(len(cp), dtype=bool)
    if not is_open or bc == 'naive_firstorder_neumann':
        return cp, active
    # ghost rows are zeroed, not extended
    if bc == 'naive_firstorder_dirichlet':
        return cp, active & ~ghost
    return np.where(ghost[:, None], cpbar, cp), active


class Band():
    """
    Narrow band of grid nodes, closed under stencil and footprint accesses

    Attributes
    ----------
    grid : :obj:`~.band.Grid`
        Grid the band lives on
    spec : :obj:`~.band.StencilSpec`
        Stencil orders the band was built for
    bc : str
        Boundary condition kind the band was built for
    open : bool
        Whether the surface has a boundary
    nodes : (m, d) `numpy.ndarray`
        Multi-indices of band nodes, lexicographically ordered
    cp, cpbar : (m, d) `numpy.ndarray`
        Closest and mirrored closest points of band nodes
    distance : (m,) `numpy.ndarray`
        Distance from each node to its closest point
    on_boundary, cpbar_boundary : (m,) `numpy.ndarray`
        Whether closest and mirrored closest points lie on the boundary
    ghost : (m,) `numpy.ndarray`
        Ghost mask
    outer_nodes, outer_cp, outer_cpbar, outer_ghost
        Same data for stencil neighbours that are not band nodes
    """

    def __init__(self, grid, spec, bc, is_open, nodes, cache, outer_nodes,
                 outer_cache):
        self.grid, self.spec, self.bc, self.open = grid, spec, bc, is_open
        self.nodes = nodes
        self.keys = node_keys(nodes)
        self.cp, self.cpbar = cache['cp'], cache['cpbar']
        self.on_boundary = cache['on_boundary']
        self.cpbar_boundary = cache['cpbar_boundary']
        self.ghost = cache['ghost']
        self.distance = np.linalg.norm(grid.coords(nodes) - self.cp, axis=1)

        self.outer_nodes = outer_nodes
        self.outer_keys = node_keys(outer_nodes)
        self.outer_cp = outer_cache['cp']
        self.outer_cpbar = outer_cache['cpbar']
        self.outer_ghost = outer_cache['ghost']

    @classmethod
    def from_nodes(cls, grid, spec, nodes, outer_nodes=None):
        """
        Creates a band whose nodes are their own closest points

        Parameters
        ----------
        grid : :obj:`~.band.Grid`
            Grid of the band
        spec : :obj:`~.band.StencilSpec`
            Stencil orders
        nodes : (m, d) array_like
            Band multi-indices
        outer_nodes : (k, d) array_like, optional
            Stencil-only multi-indices. Default: None

        Returns
        -------
        band : :obj:`~.band.Band`
        """

        def _cache(idx):
            pts = grid.coords(idx)
            flags = np.zeros(len(idx), dtype=bool)
            return dict(cp=pts, cpbar=pts.copy(), on_boundary=flags,
                        cpbar_boundary=flags.copy(), ghost=flags.copy())

        nodes = np.asarray(nodes, dtype=np.int64).reshape(-1, grid.dim)
        nodes = nodes[np.argsort(node_keys(nodes))]
        outer = (np.empty((0, grid.dim), dtype=np.int64)
                 if outer_nodes is None else
                 np.asarray(outer_nodes, dtype=np.int64).reshape(-1,
                                                                 grid.dim))
        outer = outer[np.argsort(node_keys(outer))]
        return cls(grid, spec, 'none', False, nodes, _cache(nodes), outer,
                   _cache(outer))

    @property
    def m(self):
        return len(self.nodes)

    @property
    def k(self):
        return len(self.outer_nodes)

    @property
    def n_ghost(self):
        return int(self.ghost.sum())

    @property
    def dim(self):
        return self.grid.dim

    def __len__(self):
        return self.m

    def __repr__(self):
        return 'Band(m={}, outer={}, ghosts={}, dx={})'.format(
            self.m, self.k, self.n_ghost, self.grid.dx)

    def lookup(self, idx, outer=False):
        """
        Returns row positions of multi-indices `idx`

        Parameters
        ----------
        idx : (N, d) array_like
            Multi-indices to find
        outer : bool, optional
            Whether outer nodes are searched as well; they are numbered after
            the band nodes. Default: False

        Returns
        -------
        pos : (N,) `numpy.ndarray`
            Positions, or -1 for multi-indices not found
        """

        keys = node_keys(idx)
        pos = _search(self.keys, keys)
        if outer:
            missing = pos < 0
            opos = _search(self.outer_keys, keys[missing])
            pos[missing] = np.where(opos < 0, -1, opos + self.m)
        return pos

    def index_of(self, idx):
        """
        Returns the row of band node `idx`

        Raises
        ------
        KeyError
            If `idx` is not a band node
        """
        pos = self.lookup(np.atleast_2d(idx))[0]
        if pos < 0:
            raise KeyError(tuple(np.asarray(idx).tolist()))
        return int(pos)

    def points(self, outer=False):
        """ Returns coordinates of band nodes, then outer nodes if `outer` """
        nodes = self.all_nodes() if outer else self.nodes
        return self.grid.coords(nodes)

    def all_nodes(self):
        return np.vstack([self.nodes, self.outer_nodes])

    def targets(self, bc=None, outer=True):
        """
        Returns extension targets of band (and outer) nodes

        Parameters
        ----------
        bc : str, optional
            Boundary condition kind. Default: the band's own
        outer : bool, optional
            Whether outer node targets follow band node targets. Default: True

        Returns
        -------
        targets : (N, d) `numpy.ndarray`
        active : (N,) `numpy.ndarray`
        """

        bc = self.bc if bc is None else bc
        cp, cpbar, ghost = self.cp, self.cpbar, self.ghost
        if outer:
            cp = np.vstack([cp, self.outer_cp])
            cpbar = np.vstack([cpbar, self.outer_cpbar])
            ghost = np.concatenate([ghost, self.outer_ghost])
        return target_points(cp, cpbar, ghost, self.open, bc)


def _search(sorted_keys, keys):
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.clip(pos, 0, max(len(sorted_keys) - 1, 0))
    if len(sorted_keys) == 0:
        return np.full(len(keys), -1, dtype=np.int64)
    return np.where(sorted_keys[pos] == keys, pos, -1).astype(np.int64)


def _evaluate(surface, grid, idx, tol):
    cp, onb, cpbar, onb_bar, ghost = cp_bar_points(surface, grid.coords(idx),
                                                   tol=tol)
    dist = np.linalg.norm(grid.coords(idx) - cp, axis=1)
    return dict(cp=cp, on_boundary=onb, cpbar=cpbar, cpbar_boundary=onb_bar,
                ghost=ghost, distance=dist)


def _seed(surface, grid, radius, tol, chunk_size=2 ** 16):
    # box of nodes enclosing the tube
    lo, hi = surface.bounds()
    start = np.floor(grid.grid_units(lo) - radius).astype(np.int64)
    stop = np.ceil(grid.grid_units(hi) + radius).astype(np.int64) + 1
    shape = tuple(stop - start)

    found = []
    for sl in utils.chunk_slices(int(np.prod(shape)), chunk_size):
        idx = np.column_stack(np.unravel_index(np.arange(sl.start, sl.stop),
                                               shape)) + start
        data = _evaluate(surface, grid, idx, tol)
        keep = data['distance'] <= radius * grid.dx * (1 + 1e-12)
        # mirrored closest point back on the boundary
        keep &= ~(data['ghost'] & data['cpbar_boundary'])
        if keep.any():
            found.append((idx[keep], {k: v[keep] for k, v in data.items()}))

    if not found:
        raise DomainError('No grid node lies within {:.3g} of the surface.'
                          .format(radius * grid.dx))
    nodes = np.vstack([f[0] for f in found])
    data = {k: np.concatenate([f[1][k] for f in found]) for k in found[0][1]}
    return nodes, data


def build_band(surface, grid, spec, bc='none', keep_seed=False,
               max_nodes=5000000):
    """
    Builds the computational band of `surface` on `grid`

    Seeds with every node within :func:`band_radius` of the surface, then
    adds the interpolation footprints of the extension target of every
    stencil neighbour of every band node until nothing changes. Ghost nodes
    target their mirrored closest point.

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to envelop
    grid : :obj:`~.band.Grid`
        Grid to place nodes on; should resolve the surface features
    spec : :obj:`~.band.StencilSpec`
        Stencil orders
    bc : str, optional
        Boundary condition kind. Default: 'none'
    keep_seed : bool, optional
        Whether seed nodes stay in the band themselves; otherwise the band
        starts from their footprints. Default: False
    max_nodes : int, optional
        Largest band accepted. Default: 5e6

    Returns
    -------
    band : :obj:`~.band.Band`

    Raises
    ------
    ConfigurationError
        If `bc` is unknown or a boundary condition is requested on a closed
        surface
    ResourceError
        If the band grows beyond `max_nodes`
    """

    if bc not in BC_KINDS:
        raise ConfigurationError('Unknown boundary condition {!r}'
                                 .format(bc))
    if not surface.open and bc != 'none':
        raise ConfigurationError('Boundary condition {!r} given for closed '
                                 'surface {!r}'.format(bc, surface.kind))
    if grid.dim != surface.dim:
        raise ConfigurationError('Grid dimension {} does not match surface '
                                 'dimension {}'.format(grid.dim, surface.dim))

    d, dx = grid.dim, grid.dx
    radius = band_radius(spec, d)
    tol = 1e-8 * dx
    offsets = fd_offsets(spec.q, d)

    seeds, seed_data = _seed(surface, grid, radius, tol)
    _LOGGER.debug('Seeded %d nodes within %.4g of %s', len(seeds),
                  radius * dx, surface.kind)

    def _footprint_keys(data):
        targets, active = target_points(data['cp'], data['cpbar'],
                                        data['ghost'], surface.open, bc)
        _, fp = footprints(targets[active], grid, spec.p)
        return np.unique(node_keys(fp.reshape(-1, d)))

    # band starts from the footprints of the tube's targets
    band_keys = (np.unique(node_keys(seeds)) if keep_seed
                 else _footprint_keys(seed_data))
    wave_keys = band_keys
    seen_keys = np.empty(0, dtype=np.int64)
    seen_nodes, seen_data = [], []
    n_waves = 0

    while len(wave_keys) > 0:
        n_waves += 1
        wave = _decode(wave_keys, d)
        nbr = np.unique(node_keys((wave[:, None, :]
                                   + offsets[None]).reshape(-1, d)))
        # only evaluate closest points once per node
        nbr = nbr[~np.isin(nbr, seen_keys)]
        if len(nbr) == 0:
            break
        nbr_nodes = _decode(nbr, d)
        data = _evaluate(surface, grid, nbr_nodes, tol)
        if np.any(data['distance'] > 2 * radius * dx):
            raise DomainError('Band node lies {:.3g} from the surface, more '
                              'than twice the band radius {:.3g}'
                              .format(data['distance'].max(), radius * dx))
        seen_keys = np.union1d(seen_keys, nbr)
        seen_nodes.append(nbr_nodes)
        seen_data.append(data)

        # footprints of the neighbours' targets join the band
        fp = _footprint_keys(data)
        wave_keys = fp[~np.isin(fp, band_keys)]
        band_keys = np.union1d(band_keys, wave_keys)
        if len(band_keys) > max_nodes:
            raise ResourceError('Band exceeds the node budget of {} nodes.'
                                .format(int(max_nodes)))

    # sort rows by node key so lookups can bisect
    nodes = np.vstack(seen_nodes)
    data = {k: np.concatenate([s[k] for s in seen_data])
            for k in seen_data[0]}
    order = np.argsort(node_keys(nodes))
    nodes = nodes[order]
    data = {k: v[order] for k, v in data.items()}
    # evaluated nodes outside the band are outer nodes
    inband = np.isin(node_keys(nodes), band_keys)

    band = Band(grid, spec, bc, surface.open,
                nodes[inband], {k: v[inband] for k, v in data.items()},
                nodes[~inband], {k: v[~inband] for k, v in data.items()})
    _LOGGER.info('Built band for %s at dx=%.4g: m=%d, outer=%d, ghosts=%d '
                 '(%d sweeps)', surface.kind, dx, band.m, band.k,
                 band.n_ghost, n_waves)

    return band


def _decode(keys, dim):
    keys = np.asarray(keys, dtype=np.int64)
    idx = np.empty((len(keys), dim), dtype=np.int64)
    for axis in range(dim - 1, -1, -1):
        idx[:, axis] = keys % _KEY_BASE - _KEY_SHIFT
        keys = keys // _KEY_BASE
    return idx


def band_statistics(band):
    """
    Summarizes `band`

    Parameters
    ----------
    band : :obj:`~.band.Band`

    Returns
    -------
    summary : :obj:`~.structures.BandSummary`

    Raises
    ------
    DomainError
        If `band` has no nodes
    """

    if band.m == 0:
        raise DomainError('Band has no nodes.')
    return BandSummary(m=band.m, n_ghost=band.n_ghost,
                       max_distance=float(band.distance.max()))
