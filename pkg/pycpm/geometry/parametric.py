# -*- coding: utf-8 -*-
"""
Closest points on two-parameter surfaces by sampling and Newton's method
"""

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConfigurationError
from .base import Surface


class ParametricSurface(Surface):
    """
    Surface ``X(u, v)`` with ``u`` periodic and ``v`` in ``[v0, v1]``

    Subclasses implement :meth:`frame`. Closest points minimize ``|X(u, v) -
    x|**2`` by Newton's method started from the nearest of ``n_samples**2``
    parameter samples; when Newton pushes `v` past its bounds the iteration
    continues along the boundary with steps in `u` only.
    """

    kind = 'parametric_surface'
    dim = 3
    open = True
    n_samples = 400
    newton_tol = 1e-12
    newton_maxiter = 50

    def __init__(self, u_range=(0., 2 * np.pi), v_range=(-1., 1.)):
        self.u0, self.u1 = map(float, u_range)
        self.v0, self.v1 = map(float, v_range)
        if not (self.u1 > self.u0 and self.v1 > self.v0):
            raise ConfigurationError('Parameter ranges must be increasing.')
        self._tree = None

    def frame(self, u, v):
        """
        Returns points and derivatives of the parameterization

        Parameters
        ----------
        u, v : (N,) `numpy.ndarray`
            Parameters

        Returns
        -------
        X, Xu, Xv, Xuu, Xuv, Xvv : (N, 3) `numpy.ndarray`
        """
        raise NotImplementedError

    def point(self, u, v):
        return self.frame(np.atleast_1d(u), np.atleast_1d(v))[0]

    def _samples(self):
        if self._tree is None:
            u = np.linspace(self.u0, self.u1, self.n_samples, endpoint=False)
            v = np.linspace(self.v0, self.v1, self.n_samples)
            uu, vv = [a.ravel() for a in np.meshgrid(u, v, indexing='ij')]
            self._uv = np.column_stack([uu, vv])
            self._tree = cKDTree(self.point(uu, vv))
        return self._tree, self._uv

    def _newton(self, X, u, v):
        u, v = u.copy(), v.copy()
        active = np.ones(len(u), dtype=bool)
        for _ in range(self.newton_maxiter):
            idx = np.flatnonzero(active)
            if len(idx) == 0:
                break
            ua, va = u[idx], v[idx]
            P, Xu, Xv, Xuu, Xuv, Xvv = self.frame(ua, va)
            r = P - X[idx]
            g0, g1 = (r * Xu).sum(1), (r * Xv).sum(1)
            h00 = (Xu * Xu).sum(1) + (r * Xuu).sum(1)
            h01 = (Xu * Xv).sum(1) + (r * Xuv).sum(1)
            h11 = (Xv * Xv).sum(1) + (r * Xvv).sum(1)
            det = h00 * h11 - h01 ** 2

            full = (h00 > 0) & (det > 0)
            safe = np.where(full, det, 1.)
            un = ua - np.where(full, (h11 * g0 - h01 * g1) / safe, 0.)
            vn = va - np.where(full, (h00 * g1 - h01 * g0) / safe, 0.)

            # v pinned on the boundary: move along it in u only
            pinned = ~full | (vn < self.v0) | (vn > self.v1)
            u_only = ua - g0 / np.where(h00 > 0, h00, np.inf)
            un = np.where(pinned, u_only, un)
            vn = np.where(pinned & full, np.clip(vn, self.v0, self.v1),
                          np.where(pinned, va, vn))

            bad = ~(np.isfinite(un) & np.isfinite(vn))
            un, vn = np.where(bad, ua, un), np.where(bad, va, vn)
            u[idx], v[idx] = un, vn
            step = np.maximum(np.abs(un - ua), np.abs(vn - va))
            active[idx[(step < self.newton_tol) | bad]] = False

        u = self.u0 + np.mod(u - self.u0, self.u1 - self.u0)
        return u, v

    def closest_parameters(self, X):
        """
        Returns parameters ``(u, v)`` of the closest point to each row of `X`

        Parameters
        ----------
        X : (N, 3) array_like
            Query points

        Returns
        -------
        uv : (N, 2) `numpy.ndarray`
        """

        X = np.atleast_2d(np.asarray(X, dtype=float))
        tree, uv = self._samples()
        _, nearest = tree.query(X)
        us, vs = uv[nearest, 0], uv[nearest, 1]
        un, vn = self._newton(X, us, vs)

        d_sample = ((self.point(us, vs) - X) ** 2).sum(1)
        d_newton = ((self.point(un, vn) - X) ** 2).sum(1)
        # Newton may wander to a farther local minimum
        keep = d_newton <= d_sample
        return np.column_stack([np.where(keep, un, us),
                                np.where(keep, vn, vs)])

    def closest_points(self, X):
        uv = self.closest_parameters(X)
        on_boundary = (uv[:, 1] == self.v0) | (uv[:, 1] == self.v1)
        return self.point(uv[:, 0], uv[:, 1]), on_boundary

    def sample_points(self, n):
        k = max(2, int(np.ceil(np.sqrt(n))))
        u = np.linspace(self.u0, self.u1, k, endpoint=False)
        v = np.linspace(self.v0, self.v1, k)
        uu, vv = np.meshgrid(u, v, indexing='ij')
        return self.point(uu.ravel(), vv.ravel())


class MobiusStrip(ParametricSurface):
    """
    Mobius strip of centre radius `radius` and half-width `width`

    ``X(u, v) = ((R + v cos(u/2)) cos u, (R + v cos(u/2)) sin u, v sin(u/2))``
    for ``0 <= u < 2 pi`` and ``-width <= v <= width``. Its boundary is the
    single closed curve ``v = +/-width``.
    """

    kind = 'mobius_strip'

    def __init__(self, radius=1.0, width=0.5):
        self.radius, self.width = float(radius), float(width)
        if not 0 < self.width < self.radius:
            raise ConfigurationError('Mobius strip needs 0 < width < radius, '
                                     'got width={}, radius={}'
                                     .format(width, radius))
        super().__init__(v_range=(-self.width, self.width))

    def frame(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        c2, s2 = np.cos(u / 2), np.sin(u / 2)
        cu, su = np.cos(u), np.sin(u)

        a = self.radius + v * c2
        a_u, a_v = -0.5 * v * s2, c2
        a_uu, a_uv = -0.25 * v * c2, -0.5 * s2

        X = np.column_stack([a * cu, a * su, v * s2])
        Xu = np.column_stack([a_u * cu - a * su, a_u * su + a * cu,
                              0.5 * v * c2])
        Xv = np.column_stack([a_v * cu, a_v * su, s2])
        Xuu = np.column_stack([a_uu * cu - 2 * a_u * su - a * cu,
                               a_uu * su + 2 * a_u * cu - a * su,
                               -0.25 * v * s2])
        Xuv = np.column_stack([a_uv * cu - a_v * su, a_uv * su + a_v * cu,
                               0.5 * c2])
        Xvv = np.zeros_like(X)

        return X, Xu, Xv, Xuu, Xuv, Xvv

    def bounds(self):
        extent = self.radius + self.width
        return (np.array([-extent, -extent, -self.width]),
                np.array([extent, extent, self.width]))
