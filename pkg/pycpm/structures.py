# -*- coding: utf-8 -*-
"""
Data structures to hold CPM inputs and results objects
"""

from textwrap import dedent

import numpy as np

from . import utils
from .errors import ConfigurationError
from .utils import ResDict

BC_KINDS = (
    'none', 'neumann_homogeneous', 'dirichlet_homogeneous',
    'naive_firstorder_neumann', 'naive_firstorder_dirichlet'
)
OPERATORS = ('stabilized', 'unstabilized')
SOLVERS = ('auto', 'dense', 'arnoldi')
OUTPUTS = ('csv', 'dat', 'hdf5', 'mtx', 'band')

_cpm_input_docs = dict(
    surface_params=dedent("""\
    surface : str
        Kind of surface on which to solve the eigenproblem. Must be one of
        :data:`pycpm.geometry.SURFACE_KINDS`
    radius : float, optional
        Radius for circles, semicircles, spheres and hemispheres, and for the
        generated icosphere mesh. Default: 1
    t0, t1 : float, optional
        Parameter interval of the cosine curve (default: 0.25, 4) or of the
        interval segment (default: 0, 1)
    offset : float, optional
        Height of the interval segment above the x axis. Default: 0
    width : float, optional
        Half-width of the Mobius strip. Default: 0.5
    mesh : str, optional
        Path to an ASCII OFF file for ``surface='triangulated_mesh'``. If not
        specified an icosphere with `subdivisions` levels is generated
    subdivisions : int, optional
        Subdivision level of the generated icosphere. Default: 2
    frequency : int, optional
        Number of segments each icosahedron edge is split into before
        subdividing. Default: 1
    reference : {'sphere', None}, optional
        Analytic reference spectrum to assume for triangulated meshes.
        Default: None\
    """),
    discretization=dedent("""\
    dx_list : list of float
        Grid spacings. Single-level commands use the first entry
    q : {2, 4}, optional
        Order of the finite difference Laplacian. Default: 2
    p : int, optional
        Degree of the barycentric Lagrange interpolation; ``p >= q + 1`` is
        recommended. Default: 3
    operator : {'stabilized', 'unstabilized'}, optional
        Whether to use the stabilized operator M or the plain product
        ``Delta_h E``. Default: 'stabilized'
    keep_seed : bool, optional
        Whether the computational band retains every node of the distance
        seed instead of only the interpolation footprints. Default: False
    max_nodes : int, optional
        Largest number of band nodes allowed. Default: 5e6\
    """),
    boundary=dedent("""\
    bc : str, optional
        Boundary condition treatment for open surfaces. One of 'none',
        'neumann_homogeneous', 'dirichlet_homogeneous',
        'naive_firstorder_neumann' or 'naive_firstorder_dirichlet'.
        Default: 'none'\
    """),
    solver=dedent("""\
    solver : {'auto', 'dense', 'arnoldi'}, optional
        Eigensolver. 'auto' uses the dense solver when the band has at most
        `dense_max` nodes. Default: 'auto'
    k_eigs : int, optional
        Number of eigenpairs requested from the Arnoldi solver. Default: 20
    shift : float, optional
        Shift for the shift-invert Arnoldi solver. Default: 0
    dense_max : int, optional
        Largest band handed to the dense solver. Default: 4000
    imag_tol : float, optional
        Relative imaginary part above which eigenvalues are discarded as
        complex. Default: 1e-6
    cutoff_window : float, optional
        Half-width of the window around ``2d / dx**2`` whose eigenvalues are
        discarded. If not specified, half of that value. Default: None
    cluster_window : float, optional
        Largest gap between eigenvalues of one multiplet. If not specified,
        ``10 * dx**2``. Default: None\
    """),
    study=dedent("""\
    n_track : int, optional
        Number of smallest nonzero distinct analytic eigenvalues tracked in
        convergence studies. Default: 8
    condition : bool, optional
        Whether to estimate the 2-norm condition number of the operator at
        each level. Default: False
    n_modes : int, optional
        Number of lowest modes written by the ``modes`` command. Default: None
    mode_target : float, optional
        Write the multiplet whose eigenvalues are nearest this value instead
        of the lowest `n_modes`. Default: None
    hist_bins : int, optional
        Number of bins of the real-axis eigenvalue histogram. Default: 50
    outputs : list of str, optional
        Artifacts to write, any of 'csv', 'dat', 'hdf5', 'mtx' and 'band'.
        Default: ['csv', 'dat']\
    """),
    proc_options=dedent("""\
    verbose : bool, optional
        Whether to show progress bars as the study runs. Note that progress
        bars will not persist after the study is completed. Default: True
    n_proc : int, optional
        How many workers to use for parallel assembly and for running study
        levels concurrently. If not specified the ``CPM_THREADS``
        environmental variable is used, and serialized processing otherwise.
        Can optionally specify 'max' to use all available processors.
        Default: None\
    """),
)

_DEFAULTS = dict(
    surface=None, radius=None, t0=None, t1=None, offset=None, width=None,
    mesh=None, subdivisions=2, frequency=None, reference=None, dx_list=None,
    q=2, p=3, bc='none', operator='stabilized', k_eigs=20, shift=0.0,
    solver='auto', dense_max=4000, imag_tol=1e-6, cutoff_window=None,
    cluster_window=None, n_track=8, condition=False, n_modes=None,
    mode_target=None, hist_bins=50, keep_seed=False, max_nodes=5000000,
    n_proc=None, verbose=True, outputs=('csv', 'dat')
)


class CpResult(ResDict):
    """
    Result of a single closest point query

    Attributes
    ----------
    point : (d,) `numpy.ndarray`
        Closest point on the surface
    distance : float
        Euclidean distance between the query and `point`
    on_boundary : bool
        Whether `point` lies on the boundary of an open surface
    """
    allowed = ['point', 'distance', 'on_boundary']


class CPMInputs(ResDict):
    allowed = list(_DEFAULTS)

    def __init__(self, **kwargs):
        params = dict(_DEFAULTS)
        params.update({k: v for k, v in kwargs.items() if v is not None})
        super().__init__(**params)

        if self.get('surface') is None:
            raise ConfigurationError('A surface kind must be provided.')
        self['surface'] = str(self['surface'])

        dx = self.get('dx_list')
        dx = np.atleast_1d(np.asarray([] if dx is None else dx, dtype=float))
        if dx.size == 0:
            raise ConfigurationError('At least one grid spacing must be '
                                     'provided in dx_list.')
        if not np.all(np.isfinite(dx)) or np.any(dx <= 0):
            raise ConfigurationError('Grid spacings must be finite and '
                                     'positive. Provided: {}'
                                     .format(dx.tolist()))
        self['dx_list'] = dx.tolist()

        if int(self['q']) not in (2, 4):
            raise ConfigurationError('Finite difference order q must be 2 '
                                     'or 4, not {}'.format(self['q']))
        if int(self['p']) < 1:
            raise ConfigurationError('Interpolation degree p must be at '
                                     'least 1, not {}'.format(self['p']))
        self['q'], self['p'] = int(self['q']), int(self['p'])

        for key, options in [('bc', BC_KINDS), ('operator', OPERATORS),
                             ('solver', SOLVERS)]:
            if self[key] not in options:
                raise ConfigurationError('Invalid {} {!r}. Must be one of: '
                                         '{}'.format(key, self[key],
                                                     ', '.join(options)))

        outputs = self['outputs']
        if isinstance(outputs, str):
            outputs = [o for o in outputs.split(',')]
        outputs = [utils._as_text(o).strip() for o in outputs]
        outputs = [o for o in outputs if o]
        bad = sorted(set(outputs) - set(OUTPUTS))
        if bad:
            raise ConfigurationError('Unknown outputs {}. Must be among: {}'
                                     .format(bad, ', '.join(OUTPUTS)))
        self['outputs'] = outputs

        for key in ('k_eigs', 'n_track', 'hist_bins', 'dense_max'):
            if int(self[key]) < 1:
                raise ConfigurationError('{} must be a positive integer, not '
                                         '{}'.format(key, self[key]))
            self[key] = int(self[key])

        if self.get('n_modes') is not None and int(self['n_modes']) < 1:
            raise ConfigurationError('n_modes must be positive, not {}'
                                     .format(self['n_modes']))

        for key in ('keep_seed', 'condition', 'verbose'):
            self[key] = bool(self[key])

        self['n_proc'] = utils.get_n_proc(self.get('n_proc'))


CPMInputs.__doc__ = """
CPM input information

Attributes
----------
{surface_params}
{discretization}
{boundary}
{solver}
{study}
{proc_options}
""".format(**_cpm_input_docs)


class FilterReport(ResDict):
    """
    Partition of computed eigenvalues into kept and spurious sets

    Attributes
    ----------
    kept : (K,) `numpy.ndarray`
        Indices of eigenvalues kept
    discarded_near_cutoff : (C,) `numpy.ndarray`
        Indices of eigenvalues within `window` of `cutoff`
    discarded_complex : (I,) `numpy.ndarray`
        Indices of eigenvalues with a significant imaginary part
    cutoff : float
        The singular shift ``2d / dx**2`` of the stabilized operator
    window : float
        Half-width of the discarded window around `cutoff`
    """
    allowed = [
        'kept', 'discarded_near_cutoff', 'discarded_complex',
        'cutoff', 'window'
    ]


class SpectralResult(ResDict):
    """
    Dictionary-like object containing eigenpairs of a CPM operator

    Eigenvalues are those of the negated operator, so that surface
    eigenvalues are approximately nonnegative reals.

    Attributes
    ----------
    eigenvalues : (N,) `numpy.ndarray`
        Complex eigenvalues, sorted by real part ascending
    eigenvectors : (M, N) `numpy.ndarray`
        Complex eigenvectors over the `M` band nodes
    method : {'dense', 'arnoldi'}
        Solver that produced the eigenpairs
    shift : float
        Shift used by the Arnoldi solver (0 for the dense solver)
    residuals : (N,) `numpy.ndarray`
        Relative residuals of each eigenpair
    filter : :obj:`~.structures.FilterReport`
        Spurious-mode filter decisions, as applicable
    operator : str
        Which operator was decomposed, as applicable
    """
    allowed = [
        'eigenvalues', 'eigenvectors', 'method', 'shift', 'residuals',
        'filter', 'operator'
    ]

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.filter = FilterReport(**(kwargs.get('filter') or {}))


class AnalyticSpectrum(ResDict):
    """
    Reference eigenvalues of the Laplace-Beltrami operator

    Attributes
    ----------
    multiplets : (N, 2) `numpy.ndarray`
        Distinct eigenvalues (first column, ascending) and their
        multiplicities (second column)
    provenance : str
        Description of the analytic case the values come from
    """
    allowed = ['multiplets', 'provenance']

    def expanded(self, count=None):
        """
        Returns eigenvalues repeated according to their multiplicity

        Parameters
        ----------
        count : int, optional
            Number of values to return. Default: all

        Returns
        -------
        values : `numpy.ndarray`
        """

        values = np.asarray(self.multiplets, dtype=float)
        out = np.repeat(values[:, 0], values[:, 1].astype(int))
        return out if count is None else out[:count]

    def tracked(self, n_track, zero_tol=1e-12):
        """
        Returns the smallest `n_track` distinct nonzero values

        Parameters
        ----------
        n_track : int
            Number of values to return
        zero_tol : float, optional
            Values at or below this magnitude count as zero. Default: 1e-12

        Returns
        -------
        values : `numpy.ndarray`
        """

        values = np.asarray(self.multiplets, dtype=float)[:, 0]
        return values[np.abs(values) > zero_tol][:n_track]


class BandSummary(ResDict):
    """
    Summary of a computational band

    Attributes
    ----------
    m : int
        Number of band nodes
    n_ghost : int
        Number of ghost nodes in the band
    max_distance : float
        Largest distance between a band node and its closest point
    """
    allowed = ['m', 'n_ghost', 'max_distance']


class StudyReport(ResDict):
    """
    Dictionary-like object containing results of a convergence study

    Attributes
    ----------
    dx : (L,) `numpy.ndarray`
        Grid spacing of each level
    m : (L,) `numpy.ndarray`
        Band size of each level
    n_ghost : (L,) `numpy.ndarray`
        Number of ghost nodes in each band
    lambda_analytic : (T,) `numpy.ndarray`
        Tracked analytic eigenvalues
    lambda_computed : (L, T) `numpy.ndarray`
        Computed eigenvalue paired with each tracked value; for multiplets,
        the member with the largest error
    abs_err : (L, T) `numpy.ndarray`
        Absolute eigenvalue errors; NaN where no computed value was matched
    orders : (T,) `numpy.ndarray`
        Observed convergence order of each tracked eigenvalue; NaN when fewer
        than three levels are available
    kappa : (L,) `numpy.ndarray`
        2-norm condition number of the operator, as applicable
    failed : (L,) `numpy.ndarray`
        Whether each level failed
    inputs : :obj:`~.structures.CPMInputs`
        Inputs provided to the study
    """
    allowed = [
        'dx', 'm', 'n_ghost', 'lambda_analytic', 'lambda_computed',
        'abs_err', 'orders', 'kappa', 'failed', 'inputs'
    ]

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if kwargs.get('inputs') is not None:
            self.inputs = CPMInputs(**kwargs['inputs'])
