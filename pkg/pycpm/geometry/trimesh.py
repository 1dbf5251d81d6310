# -*- coding: utf-8 -*-
"""
Closest points on triangulated surfaces
"""

import logging

import numpy as np

from .. import utils
from ..errors import ConfigurationError, DomainError
from .base import Surface

_LOGGER = logging.getLogger(__name__)

# Voronoi regions of a triangle
FACE, VERT_A, VERT_B, VERT_C, EDGE_AB, EDGE_AC, EDGE_BC = range(7)


def closest_point_on_triangles(triangles, queries):
    """
    Computes closest points from every query to every triangle

    Follows the region tests of Ericson's ``ClosestPtPointTriangle``,
    vectorized over queries and triangles at once.

    Parameters
    ----------
    triangles : (T, 3, 3) array_like
        Triangle vertices ``[A, B, C]``
    queries : (N, 3) array_like
        Query points

    Returns
    -------
    points : (N, T, 3) `numpy.ndarray`
        Closest point on each triangle to each query
    region : (N, T) `numpy.ndarray`
        Region of each closest point (face, vertex or edge code)
    """

    triangles = np.asarray(triangles, dtype=float)
    P = np.asarray(queries, dtype=float)[:, None, :]
    a, b, c = (triangles[None, :, k, :] for k in range(3))

    ab, ac = b - a, c - a
    ap, bp, cp = P - a, P - b, P - c
    d1, d2 = (ab * ap).sum(-1), (ac * ap).sum(-1)
    d3, d4 = (ab * bp).sum(-1), (ac * bp).sum(-1)
    d5, d6 = (ab * cp).sum(-1), (ac * cp).sum(-1)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    # first matching region wins, as in the sequential tests
    region = np.select(
        [(d1 <= 0) & (d2 <= 0),
         (d3 >= 0) & (d4 <= d3),
         (vc <= 0) & (d1 >= 0) & (d3 <= 0),
         (d6 >= 0) & (d5 <= d6),
         (vb <= 0) & (d2 >= 0) & (d6 <= 0),
         (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)],
        [VERT_A, VERT_B, EDGE_AB, VERT_C, EDGE_AC, EDGE_BC],
        default=FACE)

    with np.errstate(divide='ignore', invalid='ignore'):
        t_ab = d1 / (d1 - d3)
        t_ac = d2 / (d2 - d6)
        t_bc = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        denom = 1. / (va + vb + vc)
        v, w = vb * denom, vc * denom

    points = a + ab * v[..., None] + ac * w[..., None]
    for code, pts in [(VERT_A, a), (VERT_B, b), (VERT_C, c),
                      (EDGE_AB, a + t_ab[..., None] * ab),
                      (EDGE_AC, a + t_ac[..., None] * ac),
                      (EDGE_BC, b + t_bc[..., None] * (c - b))]:
        points = np.where((region == code)[..., None], pts, points)

    # face projections landing on an edge
    on_edge = region == FACE
    for code, bary in [(EDGE_BC, 1 - v - w), (EDGE_AC, v), (EDGE_AB, w)]:
        hit = on_edge & (bary <= 1e-12)
        region = np.where(hit, code, region)
        on_edge &= ~hit

    return points, region


class TriMesh(Surface):
    """
    Triangulated surface in three dimensions

    Parameters
    ----------
    vertices : (V, 3) array_like
        Vertex coordinates
    triangles : (T, 3) array_like
        Vertex indices of each triangle
    reference : {'sphere', None}, optional
        Analytic surface the mesh approximates, if any. Default: None

    Attributes
    ----------
    boundary_edges : (B, 2) `numpy.ndarray`
        Sorted vertex pairs of edges incident to exactly one triangle

    Raises
    ------
    DomainError
        If the mesh is empty, indexes missing vertices, or has a zero-area
        triangle
    """

    kind = 'triangulated_mesh'
    dim = 3

    def __init__(self, vertices, triangles, reference=None):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(triangles).reshape(-1, 3)
        if len(self.triangles) == 0:
            raise DomainError('Triangle mesh has no triangles.')
        if not np.issubdtype(self.triangles.dtype, np.integer):
            raise DomainError('Triangle indices must be integers.')
        if (self.triangles.min() < 0
                or self.triangles.max() >= len(self.vertices)):
            raise DomainError('Triangle indices must lie in [0, {}).'
                              .format(len(self.vertices)))

        corners = self.vertices[self.triangles]
        area = 0.5 * np.linalg.norm(np.cross(corners[:, 1] - corners[:, 0],
                                             corners[:, 2] - corners[:, 0]),
                                    axis=1)
        scale = np.ptp(self.vertices, axis=0).max() ** 2
        degenerate = np.flatnonzero(area <= 1e-14 * max(scale, 1e-300))
        if len(degenerate) > 0:
            raise DomainError('Triangle mesh has {} zero-area triangles, '
                              'first at index {}'
                              .format(len(degenerate), degenerate[0]))

        edges = np.sort(self.triangles[:, [0, 1, 1, 2, 0, 2]].reshape(-1, 2),
                        axis=1)
        unique, counts = np.unique(edges, axis=0, return_counts=True)
        self.boundary_edges = unique[counts == 1]
        self.open = len(self.boundary_edges) > 0
        self._boundary_vertices = set(self.boundary_edges.ravel().tolist())
        self._boundary_edge_set = set(map(tuple,
                                          self.boundary_edges.tolist()))
        self._corners = corners
        self.mesh_reference = reference

        _LOGGER.debug('Loaded mesh with %d vertices, %d triangles, %d '
                      'boundary edges', len(self.vertices),
                      len(self.triangles), len(self.boundary_edges))

    def _on_boundary(self, tri, region):
        if not self.open:
            return np.zeros(len(tri), dtype=bool)
        corners = self.triangles[tri]
        pairs = {EDGE_AB: (0, 1), EDGE_AC: (0, 2), EDGE_BC: (1, 2)}
        out = np.zeros(len(tri), dtype=bool)
        for n, (code, tidx) in enumerate(zip(region, corners)):
            if code in (VERT_A, VERT_B, VERT_C):
                out[n] = tidx[code - VERT_A] in self._boundary_vertices
            elif code in pairs:
                i, j = pairs[code]
                edge = tuple(sorted((tidx[i], tidx[j])))
                out[n] = edge in self._boundary_edge_set
        return out

    def closest_points(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        points = np.empty_like(X)
        tri = np.empty(len(X), dtype=int)
        region = np.empty(len(X), dtype=int)
        chunk = max(1, 2 ** 20 // (3 * len(self.triangles)))
        for sl in utils.chunk_slices(len(X), chunk):
            pts, reg = closest_point_on_triangles(self._corners, X[sl])
            dist = ((pts - X[sl, None, :]) ** 2).sum(-1)
            # lowest triangle index among equally close ones
            best = np.argmin(dist, axis=1)
            rows = np.arange(len(best))
            points[sl], tri[sl] = pts[rows, best], best
            region[sl] = reg[rows, best]
        return points, self._on_boundary(tri, region)

    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def sample_points(self, n):
        pts = np.vstack([self.vertices, self._corners.mean(axis=1)])
        return pts[:n]

    def reference(self, bc='none'):
        if self.mesh_reference == 'sphere':
            center = self.vertices.mean(axis=0)
            radius = np.linalg.norm(self.vertices - center, axis=1).mean()
            return 'sphere', dict(radius=float(radius))
        return None


def _split_faces(verts, faces, frequency):
    # points shared by neighbouring faces are keyed by their integer weights
    n = int(frequency)
    index, points, tris = {}, [], []
    for face in faces:
        local = {}
        for u in range(n + 1):
            for v in range(n + 1 - u):
                weights = zip(face, (n - u - v, u, v))
                key = tuple(sorted((i, w) for i, w in weights if w))
                if key not in index:
                    index[key] = len(points)
                    points.append(sum(w * verts[i] for i, w in key) / n)
                local[u, v] = index[key]
        for u in range(n):
            for v in range(n - u):
                tris.append([local[u, v], local[u + 1, v], local[u, v + 1]])
                if u + v < n - 1:
                    tris.append([local[u + 1, v], local[u + 1, v + 1],
                                 local[u, v + 1]])
    points = np.asarray(points)
    return points / np.linalg.norm(points, axis=1)[:, None], tris


def icosphere(subdivisions=2, radius=1.0, frequency=1):
    """
    Generates a triangulated sphere by subdividing an icosahedron

    Parameters
    ----------
    subdivisions : int, optional
        Number of times each triangle is split into four. Default: 2
    radius : float, optional
        Sphere radius. Default: 1
    frequency : int, optional
        Number of segments each icosahedron edge is split into before the
        subdivisions are applied. Default: 1

    Returns
    -------
    mesh : :obj:`~.geometry.trimesh.TriMesh`
        Closed mesh with ``20 * frequency**2 * 4**subdivisions`` triangles
    """

    if int(frequency) < 1 or int(subdivisions) < 0:
        raise ConfigurationError('icosphere needs frequency >= 1 and '
                                 'subdivisions >= 0.')
    phi = (1 + 5 ** 0.5) / 2
    verts = np.array([[-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
                      [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
                      [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1]])
    faces = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
             [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
             [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
             [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
    verts, faces = _split_faces(verts, faces, frequency)
    verts = [list(v) for v in verts]

    for _ in range(int(subdivisions)):
        cache, new_faces = {}, []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = (np.asarray(verts[i]) + np.asarray(verts[j])) / 2
                verts.append(list(m / np.linalg.norm(m)))
                cache[key] = len(verts) - 1
            return cache[key]

        for i, j, k in faces:
            a, b, c = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_faces += [[i, a, c], [j, b, a], [k, c, b], [a, b, c]]
        faces = new_faces

    return TriMesh(radius * np.asarray(verts), np.asarray(faces),
                   reference='sphere')
