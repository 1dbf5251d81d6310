# -*- coding: utf-8 -*-
"""
Exception hierarchy used throughout pycpm
"""


class CPMError(Exception):
    """ Base class for all errors raised by pycpm """


class ConfigurationError(CPMError, ValueError):
    """
    Invalid inputs: unknown keys, unsupported surface kinds, inconsistent
    boundary conditions, bad stencil orders, empty spacing lists
    """


class DomainError(CPMError, ValueError):
    """
    Geometric or band contract broken: queries too far from the surface,
    degenerate meshes, interpolation footprints outside the band
    """


class NumericError(CPMError, RuntimeError):
    """ Factorization or eigensolver failure """


class ResourceError(CPMError, RuntimeError):
    """ Computational band exceeds the configured node budget """
