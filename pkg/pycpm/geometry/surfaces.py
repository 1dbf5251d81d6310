# -*- coding: utf-8 -*-
"""
Closest point representations of spheres and hemispheres
"""

import numpy as np

from ..errors import ConfigurationError
from .base import Surface, bc_family


class Sphere(Surface):
    """
    Sphere of radius `radius` centred at `center`

    The centre maps to ``center + (radius, 0, 0)``.
    """

    kind = 'sphere'
    dim = 3

    def __init__(self, radius=1.0, center=(0., 0., 0.)):
        self.radius = float(radius)
        if self.radius <= 0:
            raise ConfigurationError('Sphere radius must be positive, not {}'
                                     .format(radius))
        self.center = np.asarray(center, dtype=float)

    def closest_points(self, X):
        rel = np.asarray(X, dtype=float) - self.center
        r = np.linalg.norm(rel, axis=1)
        points = np.tile([self.radius, 0., 0.], (len(rel), 1))
        nz = r > 0
        points[nz] = self.radius * rel[nz] / r[nz, None]
        return self.center + points, np.zeros(len(rel), dtype=bool)

    def bounds(self):
        return self.center - self.radius, self.center + self.radius

    def sample_points(self, n):
        # Fibonacci lattice
        k = np.arange(n) + 0.5
        z = 1 - 2 * k / n
        phi = np.pi * (1 + 5 ** 0.5) * k
        rho = np.sqrt(1 - z ** 2)
        pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
        return self.center + self.radius * pts

    def reference(self, bc='none'):
        return 'sphere', dict(radius=self.radius)


class Hemisphere(Sphere):
    """
    Upper half (``z >= 0``) of a sphere, bounded by its equator

    Queries below the equator plane map to the nearest point on the equator;
    queries on the axis map to ``center + (radius, 0, 0)``.
    """

    kind = 'hemisphere'
    open = True

    def closest_points(self, X):
        rel = np.asarray(X, dtype=float) - self.center
        R = self.radius
        r = np.linalg.norm(rel, axis=1)
        rho = np.linalg.norm(rel[:, :2], axis=1)

        # project on the rim, then replace the points above the equator
        points = np.tile([R, 0., 0.], (len(rel), 1))
        below = rho > 0
        points[below, :2] = R * rel[below, :2] / rho[below, None]

        upper = (rel[:, 2] >= 0) & (r > 0)
        points[upper] = R * rel[upper] / r[upper, None]

        return self.center + points, points[:, 2] == 0

    def bounds(self):
        lo, hi = super().bounds()
        lo[2] = self.center[2]
        return lo, hi

    def sample_points(self, n):
        pts = super().sample_points(2 * n) - self.center
        return self.center + pts[pts[:, 2] >= 0][:n]

    def reference(self, bc='none'):
        family = bc_family(bc)
        if family is None:
            return None
        return 'hemisphere_' + family, dict(radius=self.radius)
