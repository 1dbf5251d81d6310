# -*- coding: utf-8 -*-
"""
Codimension-zero solids whose closest point map is the identity inside
"""

import numpy as np

from .base import Surface

_L_VERTICES = np.array([[-1., -1.], [1., -1.], [1., 0.],
                        [0., 0.], [0., 1.], [-1., 1.]])


class LShape(Surface):
    """
    L-shaped region ``[-1, 1]**2`` minus ``(0, 1] x (0, 1]``

    Points of the closed region are their own closest points. Outside points
    map to the nearest point of the boundary polygon, with the lowest
    numbered polygon edge winning ties. Closest points on the polygon are
    boundary points, so outside grid nodes become mirrored ghost nodes.
    """

    kind = 'l_shape_solid'
    dim = 2
    open = True

    def __init__(self):
        self.vertices = _L_VERTICES.copy()
        self.edges = np.stack([self.vertices,
                               np.roll(self.vertices, -1, axis=0)], axis=1)

    @staticmethod
    def contains(X):
        """ Returns whether each row of `X` lies in the closed L-shape """
        x, y = X[:, 0], X[:, 1]
        lower = (x >= -1) & (x <= 1) & (y >= -1) & (y <= 0)
        left = (x >= -1) & (x <= 0) & (y >= -1) & (y <= 1)
        return lower | left

    def _nearest_on_polygon(self, X):
        a, b = self.edges[:, 0], self.edges[:, 1]
        ab = b - a
        t = np.einsum('nkd,kd->nk', X[:, None, :] - a[None], ab)
        t = np.clip(t / (ab ** 2).sum(1), 0, 1)
        proj = a[None] + t[..., None] * ab[None]
        dist = np.linalg.norm(proj - X[:, None, :], axis=2)
        best = np.argmin(dist, axis=1)
        rows = np.arange(len(X))
        return proj[rows, best], dist[rows, best]

    def closest_points(self, X):
        X = np.asarray(X, dtype=float)
        points, dist = self._nearest_on_polygon(X)
        on_boundary = dist <= 1e-14

        # the solid is its own closest point set
        inside = self.contains(X)
        points[inside] = X[inside]
        return points, on_boundary | ~inside

    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def sample_points(self, n):
        k = max(2, int(np.ceil(np.sqrt(4 * n / 3))))
        g = np.linspace(-1, 1, k)
        X = np.column_stack([a.ravel() for a in np.meshgrid(g, g)])
        return X[self.contains(X)]

    def reference(self, bc='none'):
        # no closed form on the L-shaped domain
        return None
