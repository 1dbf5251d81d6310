# -*- coding: utf-8 -*-
"""
Closest point representations of curves, surfaces and solids
"""

__all__ = [
    'SURFACE_KINDS', 'make_surface', 'Surface', 'closest_point', 'cp_bar',
    'cp_bar_points', 'is_ghost', 'cp_parametric', 'cp_trimesh',
    'stencil_radius', 'Circle', 'Semicircle', 'Segment', 'ParametricCurve',
    'EggCurve', 'CosineCurve', 'Sphere', 'Hemisphere', 'ParametricSurface',
    'MobiusStrip', 'LShape', 'TriMesh', 'icosphere'
]

from ..errors import ConfigurationError
from .base import (Surface, closest_point, cp_bar, cp_bar_points, is_ghost,
                   cp_parametric, cp_trimesh, stencil_radius)
from .curves import (Circle, Semicircle, Segment, ParametricCurve, EggCurve,
                     CosineCurve)
from .parametric import ParametricSurface, MobiusStrip
from .solids import LShape
from .surfaces import Sphere, Hemisphere
from .trimesh import TriMesh, icosphere


def _segment(t0=None, t1=None, offset=None, **kwargs):
    t0 = 0. if t0 is None else float(t0)
    t1 = 1. if t1 is None else float(t1)
    y = 0. if offset is None else float(offset)
    return Segment((t0, y), (t1, y))


def _cosine(t0=None, t1=None, **kwargs):
    return CosineCurve(t0=0.25 if t0 is None else t0,
                       t1=4. if t1 is None else t1)


def _mesh(mesh=None, subdivisions=2, frequency=None, radius=None,
          reference=None, **kwargs):
    if mesh is None:
        return icosphere(subdivisions=subdivisions,
                         frequency=1 if frequency is None else frequency,
                         radius=1. if radius is None else radius)
    from ..io import read_off
    return read_off(mesh, reference=reference)


def _radius(cls):
    def make(radius=None, **kwargs):
        return cls(radius=1. if radius is None else radius)
    return make


_FACTORIES = {
    'circle': _radius(Circle),
    'semicircle': _radius(Semicircle),
    'egg_curve': lambda **kwargs: EggCurve(),
    'cosine_curve': _cosine,
    'interval_segment': _segment,
    'sphere': _radius(Sphere),
    'hemisphere': _radius(Hemisphere),
    'mobius_strip': lambda width=None, **kwargs: MobiusStrip(
        width=0.5 if width is None else width),
    'l_shape_solid': lambda **kwargs: LShape(),
    'triangulated_mesh': _mesh,
}

SURFACE_KINDS = tuple(_FACTORIES)


def make_surface(kind, **params):
    """
    Creates the surface registered under `kind`

    Parameters
    ----------
    kind : str
        One of :data:`SURFACE_KINDS`
    params
        Surface parameters (`radius`, `t0`, `t1`, `offset`, `width`,
        `mesh`, `subdivisions`, `frequency`, `reference`); parameters a
        surface does not use are ignored

    Returns
    -------
    surface : :obj:`~.geometry.base.Surface`

    Raises
    ------
    ConfigurationError
        If `kind` is not a registered surface
    """

    try:
        factory = _FACTORIES[kind]
    except KeyError:
        raise ConfigurationError('Unknown surface kind {!r}. Valid kinds: {}'
                                 .format(kind, ', '.join(SURFACE_KINDS)))
    return factory(**{k: v for k, v in params.items() if v is not None})
