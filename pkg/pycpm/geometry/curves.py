# -*- coding: utf-8 -*-
"""
Closest point representations of curves embedded in the plane
"""

import numpy as np
from scipy import integrate

from .. import utils
from ..errors import ConfigurationError
from .base import Surface, bc_family


def _interval_reference(bc, length):
    family = bc_family(bc)
    if family is None:
        return None
    return 'interval_' + family, dict(length=length)


class Circle(Surface):
    """
    Circle of radius `radius` centred at `center`

    The centre of the circle is equidistant from every point; it is mapped to
    ``center + (radius, 0)``.
    """

    kind = 'circle'

    def __init__(self, radius=1.0, center=(0., 0.)):
        self.radius = float(radius)
        if self.radius <= 0:
            raise ConfigurationError('Circle radius must be positive, not {}'
                                     .format(radius))
        self.center = np.asarray(center, dtype=float)

    def closest_points(self, X):
        rel = np.asarray(X, dtype=float) - self.center
        r = np.linalg.norm(rel, axis=1)
        points = np.tile(self.center + [self.radius, 0.], (len(rel), 1))
        nz = r > 0
        points[nz] = self.center + self.radius * rel[nz] / r[nz, None]
        return points, np.zeros(len(rel), dtype=bool)

    def bounds(self):
        return self.center - self.radius, self.center + self.radius

    def sample_points(self, n):
        theta = np.linspace(0, 2 * np.pi, n, endpoint=False)
        return self.center + self.radius * np.column_stack([np.cos(theta),
                                                            np.sin(theta)])

    def reference(self, bc='none'):
        return 'circle', dict(radius=self.radius)

    def as_parametric(self):
        """ Returns the angle parameterization of the circle """
        R, c = self.radius, self.center
        return ParametricCurve(
            lambda t: c + R * np.column_stack([np.cos(t), np.sin(t)]),
            lambda t: R * np.column_stack([-np.sin(t), np.cos(t)]),
            lambda t: -R * np.column_stack([np.cos(t), np.sin(t)]),
            t0=0., t1=2 * np.pi, closed=True)


class Semicircle(Circle):
    """
    Upper half (``y >= 0``) of a circle; an open curve with two endpoints

    Queries whose radial projection falls below the diameter map to the
    nearer endpoint, with ties going to ``center + (radius, 0)``.
    """

    kind = 'semicircle'
    open = True

    def closest_points(self, X):
        rel = np.asarray(X, dtype=float) - self.center
        r = np.linalg.norm(rel, axis=1)
        R = self.radius

        right, left = np.array([R, 0.]), np.array([-R, 0.])
        to_left = (np.linalg.norm(rel - left, axis=1)
                   < np.linalg.norm(rel - right, axis=1))
        points = np.where(to_left[:, None], left, right)

        radial = (rel[:, 1] >= 0) & (r > 0)
        points[radial] = R * rel[radial] / r[radial, None]
        on_boundary = (points[:, 1] == 0) & (np.abs(points[:, 0]) == R)

        return self.center + points, on_boundary

    def bounds(self):
        return (self.center - [self.radius, 0.],
                self.center + [self.radius, self.radius])

    def sample_points(self, n):
        theta = np.linspace(0, np.pi, n)
        return self.center + self.radius * np.column_stack([np.cos(theta),
                                                            np.sin(theta)])

    def reference(self, bc='none'):
        return _interval_reference(bc, np.pi * self.radius)

    def as_parametric(self):
        curve = super().as_parametric()
        return ParametricCurve(curve.gamma, curve.dgamma, curve.d2gamma,
                               t0=0., t1=np.pi, closed=False)


class Segment(Surface):
    """
    Straight segment from `start` to `end`

    Parameters
    ----------
    start, end : array_like
        Endpoints of the segment
    """

    kind = 'interval_segment'
    open = True

    def __init__(self, start=(0., 0.), end=(1., 0.)):
        self.start = np.asarray(start, dtype=float)
        self.end = np.asarray(end, dtype=float)
        self.dim = len(self.start)
        self.length = float(np.linalg.norm(self.end - self.start))
        if self.length == 0:
            raise ConfigurationError('Segment endpoints must differ.')

    def parameters(self, X):
        """ Returns clipped projection parameters in [0, 1] of `X` """
        ab = self.end - self.start
        t = (np.asarray(X, dtype=float) - self.start) @ ab / (ab @ ab)
        return np.clip(t, 0, 1)

    def closest_points(self, X):
        t = self.parameters(X)
        points = self.start + t[:, None] * (self.end - self.start)
        return points, (t == 0) | (t == 1)

    def bounds(self):
        return (np.minimum(self.start, self.end),
                np.maximum(self.start, self.end))

    def sample_points(self, n):
        t = np.linspace(0, 1, n)
        return self.start + t[:, None] * (self.end - self.start)

    def reference(self, bc='none'):
        return _interval_reference(bc, self.length)

    def as_parametric(self):
        a, ab = self.start, self.end - self.start
        return ParametricCurve(
            lambda t: a + np.asarray(t)[:, None] * ab,
            lambda t: np.tile(ab, (len(t), 1)),
            lambda t: np.zeros((len(t), len(ab))),
            t0=0., t1=1., closed=False)


class ParametricCurve(Surface):
    """
    Curve given by a C2 parameterization ``gamma(t)``, ``t0 <= t <= t1``

    Closest points minimize ``|gamma(t) - x|**2``: the best of 400 parameter
    samples seeds a Newton iteration, and the sample is kept whenever Newton
    does not improve on it. Among equally close candidates the smallest
    parameter value wins.

    Parameters
    ----------
    gamma, dgamma, d2gamma : callable
        Vectorized curve and its first two derivatives; each maps an (N,)
        array of parameters to an (N, d) array
    t0, t1 : float, optional
        Parameter interval. Default: 0, 2 pi
    closed : bool, optional
        Whether ``gamma(t0) == gamma(t1)`` and the curve is periodic.
        Default: True
    """

    kind = 'parametric_curve'
    n_samples = 400
    newton_tol = 1e-12
    newton_maxiter = 50

    def __init__(self, gamma, dgamma, d2gamma, t0=0., t1=2 * np.pi,
                 closed=True):
        self.gamma, self.dgamma, self.d2gamma = gamma, dgamma, d2gamma
        self.t0, self.t1 = float(t0), float(t1)
        if not self.t1 > self.t0:
            raise ConfigurationError('Parameter interval must be increasing, '
                                     'got [{}, {}]'.format(t0, t1))
        self.closed = bool(closed)
        self.open = not self.closed
        self._ts = np.linspace(self.t0, self.t1, self.n_samples,
                               endpoint=self.open)
        self._samples = self.gamma(self._ts)
        self.dim = self._samples.shape[1]

    def _sample_guess(self, X):
        t = np.empty(len(X))
        for sl in utils.chunk_slices(len(X), 2048):
            dist = ((X[sl, None, :] - self._samples[None]) ** 2).sum(-1)
            dmin = dist.min(axis=1, keepdims=True)
            # first sample within rounding of the minimum
            t[sl] = self._ts[np.argmax(dist <= dmin * (1 + 1e-12), axis=1)]
        return t

    def _newton(self, X, t):
        t = t.copy()
        active = np.ones(len(t), dtype=bool)
        for _ in range(self.newton_maxiter):
            idx = np.flatnonzero(active)
            if len(idx) == 0:
                break
            ta = t[idx]
            r = self.gamma(ta) - X[idx]
            g1, g2 = self.dgamma(ta), self.d2gamma(ta)
            f1 = (r * g1).sum(1)
            f2 = (g1 * g1).sum(1) + (r * g2).sum(1)
            # stop where the squared distance is not convex
            ok = f2 > 0
            tn = ta - np.where(ok, f1 / np.where(ok, f2, 1.), 0.)
            if self.open:
                tn = np.clip(tn, self.t0, self.t1)
            tn = np.where(np.isfinite(tn), tn, ta)
            t[idx] = tn
            active[idx[~ok | (np.abs(tn - ta) < self.newton_tol)]] = False
        if self.closed:
            t = self.t0 + np.mod(t - self.t0, self.t1 - self.t0)
        return t

    def closest_parameters(self, X):
        """
        Returns the parameter of the closest point to every row of `X`

        Parameters
        ----------
        X : (N, d) array_like
            Query points

        Returns
        -------
        t : (N,) `numpy.ndarray`
        """

        X = np.atleast_2d(np.asarray(X, dtype=float))
        guess = self._sample_guess(X)
        # keep Newton only where it beats the sampled guess
        candidates = [guess, self._newton(X, guess)]
        if self.open:
            candidates += [np.full(len(X), self.t0), np.full(len(X), self.t1)]
        T = np.column_stack(candidates)
        D = np.column_stack([((self.gamma(T[:, j]) - X) ** 2).sum(1)
                             for j in range(T.shape[1])])
        dmin = D.min(axis=1, keepdims=True)
        return np.where(D <= dmin * (1 + 1e-12) + 1e-28, T, np.inf).min(1)

    def closest_points(self, X):
        t = self.closest_parameters(X)
        on_boundary = np.zeros(len(t), dtype=bool)
        if self.open:
            on_boundary = (t == self.t0) | (t == self.t1)
        return self.gamma(t), on_boundary

    def sample_points(self, n):
        return self.gamma(np.linspace(self.t0, self.t1, n,
                                      endpoint=self.open))

    def speed(self, t):
        """ Returns ``|gamma'(t)|`` """
        return np.linalg.norm(self.dgamma(np.atleast_1d(t)), axis=1)

    def as_parametric(self):
        return self

    def reference(self, bc='none'):
        from ..harness import arclength

        if self.closed:
            return 'closed_curve', dict(length=arclength(self))
        return _interval_reference(bc, arclength(self))


class EggCurve(ParametricCurve):
    """
    Closed egg-shaped curve scaled to total arclength `length`

    ``gamma(t) = c (cos t, 1.2 sin t (1 + 0.15 cos t))`` for ``0 <= t < 2
    pi``, with the scale ``c`` found by quadrature.
    """

    kind = 'egg_curve'

    def __init__(self, length=2 * np.pi):
        self.length = float(length)
        self.scale = 1.0
        unit = integrate.quad(
            lambda t: self._unit_speed(np.atleast_1d(t))[0],
            0, 2 * np.pi, epsabs=0, epsrel=1e-12, limit=200)[0]
        self.scale = self.length / unit
        super().__init__(self._gamma, self._dgamma, self._d2gamma,
                         t0=0., t1=2 * np.pi, closed=True)

    def _gamma(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * np.column_stack(
            [np.cos(t), 1.2 * (np.sin(t) + 0.075 * np.sin(2 * t))])

    def _dgamma(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * np.column_stack(
            [-np.sin(t), 1.2 * (np.cos(t) + 0.15 * np.cos(2 * t))])

    def _d2gamma(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * np.column_stack(
            [-np.cos(t), 1.2 * (-np.sin(t) - 0.3 * np.sin(2 * t))])

    def _unit_speed(self, t):
        return np.linalg.norm(self._dgamma(t), axis=1) / self.scale

    def reference(self, bc='none'):
        return 'closed_curve', dict(length=self.length)


class CosineCurve(ParametricCurve):
    """
    Open curve ``(t, cos t)`` for ``t0 <= t <= t1``

    Parameters
    ----------
    t0, t1 : float, optional
        Parameter interval. Default: 0.25, 4
    """

    kind = 'cosine_curve'

    def __init__(self, t0=0.25, t1=4.0):
        super().__init__(
            lambda t: np.column_stack([t, np.cos(t)]),
            lambda t: np.column_stack([np.ones_like(t), -np.sin(t)]),
            lambda t: np.column_stack([np.zeros_like(t), -np.cos(t)]),
            t0=t0, t1=t1, closed=False)
