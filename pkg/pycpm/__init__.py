# -*- coding: utf-8 -*-

__all__ = [
    '__version__',
    'make_surface', 'build_band', 'build_operators', 'compute_spectrum',
    'filter_spurious', 'run_study', 'save_results', 'load_results',
    'examples', 'CPMInputs', 'SpectralResult', 'StudyReport', 'CPMError',
    'ConfigurationError', 'DomainError', 'NumericError', 'ResourceError'
]

__version__ = '0.1.0'

from . import examples
from .band import build_band
from .discretize import build_operators
from .eig import compute_spectrum, filter_spurious
from .errors import (CPMError, ConfigurationError, DomainError, NumericError,
                     ResourceError)
from .geometry import make_surface
from .harness import run_study
from .io import load_results, save_results
from .structures import CPMInputs, SpectralResult, StudyReport
