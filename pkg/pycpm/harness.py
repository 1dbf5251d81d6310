# -*- coding: utf-8 -*-
"""
Analytic reference spectra, eigenvalue matching and convergence studies
"""

import logging
import warnings

import numpy as np
from scipy import integrate

from . import utils
from .band import Grid, StencilSpec, build_band
from .discretize import build_operators
from .eig import (arnoldi_near_shift, compute_spectrum,
                  condition_number_2norm, filter_spurious, realify,
                  sample_eigenfunction)
from .errors import ConfigurationError, CPMError, DomainError
from .geometry import Circle, make_surface
from .structures import (AnalyticSpectrum, CPMInputs, SpectralResult,
                         StudyReport, _cpm_input_docs)

_LOGGER = logging.getLogger(__name__)

SURFACE_PARAMS = ('radius', 't0', 't1', 'offset', 'width', 'mesh',
                  'subdivisions', 'frequency', 'reference')


def _levels(start, n_values):
    return np.arange(start, start + n_values)


def analytic_spectrum(case, n_values=50, **params):
    """
    Returns eigenvalues of the Laplace-Beltrami operator for `case`

    Parameters
    ----------
    case : str
        One of 'closed_curve' (`length`), 'circle' (`radius`),
        'interval_dirichlet' (`length`), 'interval_neumann' (`length`),
        'hemisphere_neumann' (`radius`), 'hemisphere_dirichlet' (`radius`)
        or 'sphere' (`radius`)
    n_values : int, optional
        Number of distinct eigenvalues. Default: 50
    params
        Length or radius of the case; both default to 1

    Returns
    -------
    spectrum : :obj:`~.structures.AnalyticSpectrum`

    Raises
    ------
    ConfigurationError
        If `case` is not supported
    """

    length = float(params.get('length', 1.))
    radius = float(params.get('radius', 1.))

    if case in ('closed_curve', 'circle'):
        scale = 2 * np.pi / length if case == 'closed_curve' else 1 / radius
        n = _levels(0, n_values)
        values = (scale * n) ** 2
        mult = np.where(n == 0, 1, 2)
        size = length if case == 'closed_curve' else radius
    elif case in ('interval_dirichlet', 'interval_neumann'):
        k = _levels(1 if case == 'interval_dirichlet' else 0, n_values)
        values = (k * np.pi / length) ** 2
        mult = np.ones_like(k)
        size = length
    elif case in ('hemisphere_neumann', 'hemisphere_dirichlet', 'sphere'):
        ll = _levels(1 if case == 'hemisphere_dirichlet' else 0, n_values)
        values = ll * (ll + 1) / radius ** 2
        mult = {'hemisphere_neumann': ll + 1,
                'hemisphere_dirichlet': ll,
                'sphere': 2 * ll + 1}[case]
        size = radius
    else:
        raise ConfigurationError('Unsupported analytic spectrum {!r}'
                                 .format(case))

    label = 'arclength' if case == 'closed_curve' else (
        'length' if case.startswith('interval') else 'radius')
    return AnalyticSpectrum(
        multiplets=np.column_stack([values, mult]).astype(float),
        provenance='{}({}={:.12g})'.format(case, label, size))


def arclength(curve, quad_tol=1e-12):
    """
    Returns the arclength of a parameterized curve

    Parameters
    ----------
    curve : :obj:`~.geometry.curves.ParametricCurve`
        Curve, or any surface providing ``as_parametric()``
    quad_tol : float, optional
        Relative tolerance of the adaptive quadrature. Default: 1e-12

    Returns
    -------
    length : float
    """

    curve = curve.as_parametric()
    return integrate.quad(lambda t: curve.speed(t)[0], curve.t0, curve.t1,
                          epsabs=0, epsrel=quad_tol, limit=200)[0]


def match_eigenvalues(computed, analytic, count=None):
    """
    Pairs computed eigenvalues with analytic ones in ascending order

    Analytic values are repeated according to their multiplicity and paired
    greedily, smallest first, with the sorted computed values.

    Parameters
    ----------
    computed : (N,) array_like
        Computed (real) eigenvalues; sorted before matching
    analytic : :obj:`~.structures.AnalyticSpectrum`
        Reference spectrum
    count : int, optional
        Number of pairs. Default: ``len(computed)``

    Returns
    -------
    pairs : (count, 3) `numpy.ndarray`
        Analytic value, computed value and absolute error of each pair;
        computed value and error are NaN where no computed value is left
    """

    computed = np.sort(np.real(np.asarray(computed)))
    count = len(computed) if count is None else int(count)
    reference = analytic.expanded()
    if len(reference) < count:
        raise ConfigurationError('Analytic spectrum has only {} values; {} '
                                 'requested'.format(len(reference), count))

    pairs = np.full((count, 3), np.nan)
    pairs[:, 0] = reference[:count]
    n = min(count, len(computed))
    pairs[:n, 1] = computed[:n]
    pairs[:n, 2] = np.abs(computed[:n] - pairs[:n, 0])
    if n < count:
        warnings.warn('Only {} computed eigenvalues for {} analytic values; '
                      'unmatched values are NaN.'.format(n, count),
                      stacklevel=2)
    return pairs


def observed_order(errors, dxs, min_levels=2):
    """
    Least-squares slope of ``log(error)`` against ``log(dx)``

    Each column is fitted over the spacings where its error is available.

    Parameters
    ----------
    errors : (L,) or (L, T) array_like
        Errors at each grid spacing; NaN marks a missing error
    dxs : (L,) array_like
        Grid spacings
    min_levels : int, optional
        Fewest available errors a column needs to be fitted. Default: 2

    Returns
    -------
    order : float or (T,) `numpy.ndarray`
        Observed order of each column; ``inf`` where an error is exactly
        zero and NaN where fewer than `min_levels` errors are available
    """

    errors = np.asarray(errors, dtype=float)
    dxs = np.asarray(dxs, dtype=float)
    if len(dxs) < 2 or errors.shape[0] != len(dxs):
        raise ConfigurationError('Observed order needs errors at two or more '
                                 'grid spacings.')
    min_levels = max(2, int(min_levels))

    cols = errors.reshape(len(dxs), -1)
    orders = np.full(cols.shape[1], np.nan)
    for n, col in enumerate(cols.T):
        have = ~np.isnan(col)
        if have.sum() < min_levels:
            continue
        # exact values have no finite order
        if np.any(col[have] == 0):
            orders[n] = np.inf
            continue
        orders[n] = np.polyfit(np.log(dxs[have]), np.log(col[have]), 1)[0]
    return orders[0] if errors.ndim == 1 else orders


def embedded_circle_eigenfunction(lam, R, eps, r, theta):
    """
    Evaluates the embedded eigenfunction of the regularized circle problem

    ``v = (lam eps**2 (1 - R**2 / r**2) / (4 - lam eps**2) + 1)
    cos(sqrt(lam) R theta)``, which equals the surface eigenfunction on
    ``r = R``.

    Parameters
    ----------
    lam : float
        Eigenvalue
    R : float
        Circle radius
    eps : float
        Regularization length, usually the grid spacing
    r, theta : array_like
        Polar coordinates of the evaluation points

    Returns
    -------
    v : `numpy.ndarray`

    Raises
    ------
    DomainError
        If ``lam * eps**2 == 4`` or a radius is not positive
    """

    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    denom = 4 - lam * eps ** 2
    if denom == 0:
        raise DomainError('Embedded eigenfunction is singular for '
                          'lambda * eps**2 = 4.')
    if np.any(r <= 0):
        raise DomainError('Radii must be positive.')
    radial = lam * eps ** 2 * (1 - R ** 2 / r ** 2) / denom + 1
    return radial * np.cos(np.sqrt(lam) * R * theta)


def discretize_level(surface, dx, p=3, q=2, bc='none', keep_seed=False,
                     max_nodes=5000000, n_proc=None):
    """
    Builds the band and operators of `surface` at grid spacing `dx`

    Parameters
    ----------
    surface : :obj:`~.geometry.base.Surface`
        Surface to discretize
    dx : float
        Grid spacing
    p, q : int, optional
        Interpolation degree and finite difference order. Default: 3, 2
    bc : str, optional
        Boundary condition kind. Default: 'none'
    keep_seed : bool, optional
        Whether seed nodes stay in the band. Default: False
    max_nodes : int, optional
        Band node budget. Default: 5e6
    n_proc : int, optional
        Number of threads assembling the extension matrix. Default: None

    Returns
    -------
    band : :obj:`~.band.Band`
    operators : :obj:`~.discretize.Operators`
    """

    grid = Grid(dx, dim=surface.dim)
    band = build_band(surface, grid, StencilSpec(p=p, q=q), bc=bc,
                      keep_seed=keep_seed, max_nodes=max_nodes)
    return band, build_operators(band, n_proc=n_proc)


def circle_mode_agreement(dx, p=3, q=2, radius=1.0, n_samples=64):
    """
    Compares the discrete first circle mode with the embedded eigenfunction

    The eigenvector of the stabilized operator nearest ``1 / radius**2`` is
    fitted on the circle by ``a cos(theta) + b sin(theta)``; the embedded
    eigenfunction with the same coefficients is then compared against the
    eigenvector at band nodes off the circle.

    Parameters
    ----------
    dx : float
        Grid spacing, also used as the regularization length
    p, q : int, optional
        Interpolation degree and finite difference order. Default: 3, 2
    radius : float, optional
        Circle radius. Default: 1
    n_samples : int, optional
        Number of surface points used for the fit. Default: 64

    Returns
    -------
    error : float
        Largest difference at off-surface nodes, relative to the largest
        nodal value
    """

    circle = Circle(radius=radius)
    band, ops = discretize_level(circle, dx, p=p, q=q)
    res = arnoldi_near_shift(ops.M, 2, shift=0.9 / radius ** 2)
    u = realify(res.eigenvectors[:, 0])

    theta = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    samples = sample_eigenfunction(
        SpectralResult(eigenvectors=u), band, band.grid, p,
        circle.sample_points(n_samples))
    basis = np.column_stack([np.cos(theta), np.sin(theta)])
    (a, b), *_ = np.linalg.lstsq(basis, samples, rcond=None)

    # compare off the surface, where the extension is nontrivial
    X = band.points()
    r = np.linalg.norm(X, axis=1)
    phi = np.arctan2(X[:, 1], X[:, 0])
    off = band.distance > 1e-12
    lam = 1. / radius ** 2
    predicted = (a * embedded_circle_eigenfunction(lam, radius, dx, r, phi)
                 + b * embedded_circle_eigenfunction(lam, radius, dx, r,
                                                     phi - np.pi / 2))
    return float(np.abs(u[off] - predicted[off]).max() / np.abs(u).max())


def solve_level(inputs, dx=None, operator=None, surface=None):
    """
    Discretizes and solves a single level described by `inputs`

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
        Study inputs
    dx : float, optional
        Grid spacing. Default: first entry of ``inputs.dx_list``
    operator : {'stabilized', 'unstabilized'}, optional
        Operator to decompose. Default: ``inputs.operator``
    surface : :obj:`~.geometry.base.Surface`, optional
        Prebuilt surface. Default: built from `inputs`

    Returns
    -------
    band : :obj:`~.band.Band`
    operators : :obj:`~.discretize.Operators`
    result : :obj:`~.structures.SpectralResult`
        Eigenpairs with their filter report in ``result.filter``
    """

    dx = inputs.dx_list[0] if dx is None else dx
    operator = inputs.operator if operator is None else operator
    surface = make_inputs_surface(inputs) if surface is None else surface

    band, ops = discretize_level(surface, dx, p=inputs.p, q=inputs.q,
                                 bc=inputs.bc, keep_seed=inputs.keep_seed,
                                 max_nodes=inputs.max_nodes,
                                 n_proc=inputs.n_proc)
    op = ops.M if operator == 'stabilized' else ops.M_tilde
    res = compute_spectrum(op, k=inputs.k_eigs, shift=inputs.shift,
                           method=inputs.solver, dense_max=inputs.dense_max)
    res.operator = operator
    filter_spurious(res, dx, surface.dim, imag_tol=inputs.imag_tol,
                    cutoff_window=inputs.cutoff_window)
    return band, ops, res


def make_inputs_surface(inputs):
    """ Creates the surface described by `inputs` """
    return make_surface(inputs.surface,
                        **{k: inputs.get(k) for k in SURFACE_PARAMS})


class ConvergenceStudy():
    """
    Runs one CPM eigenproblem per grid spacing and compares with theory

    Parameters
    ----------
    inputs : :obj:`~.structures.CPMInputs`
        Study inputs
    """

    def __init__(self, inputs):
        self.inputs = inputs
        self.surface = make_inputs_surface(inputs)
        analytic = self.surface.analytic_spectrum(inputs.bc, n_values=200)
        self.analytic = analytic
        if analytic is None:
            self.tracked = np.empty(0)
        else:
            self.tracked = analytic.tracked(inputs.n_track)

    def _match_level(self, res, report):
        """ Worst computed member and error of each tracked multiplet """
        T = len(self.tracked)
        computed, errors = np.full(T, np.nan), np.full(T, np.nan)
        if T == 0:
            return computed, errors

        kept = np.asarray(res.eigenvalues)[report.kept].real
        reference = self.analytic.expanded()
        # expand far enough to cover every member of the last multiplet
        count = int(np.searchsorted(reference, self.tracked[-1],
                                    side='right'))
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            pairs = match_eigenvalues(kept, self.analytic, count=count)
        for n, lam in enumerate(self.tracked):
            rows = pairs[np.isclose(pairs[:, 0], lam, rtol=1e-12, atol=0)]
            if np.any(np.isnan(rows[:, 2])):
                continue
            # a multiplet is only as accurate as its worst member
            worst = np.argmax(rows[:, 2])
            computed[n], errors[n] = rows[worst, 1], rows[worst, 2]
        return computed, errors

    def _single_level(self, dx):
        """
        Solves the level with spacing `dx`

        Returns
        -------
        level : dict
            Band size, ghost count, matched values, errors, condition number
            and failure flag of the level
        """

        inputs = self.inputs
        T = len(self.tracked)
        level = dict(dx=dx, m=0, n_ghost=0, computed=np.full(T, np.nan),
                     errors=np.full(T, np.nan), kappa=np.nan, failed=False)
        try:
            band, ops, res = solve_level(inputs, dx=dx, surface=self.surface)
            level.update(m=band.m, n_ghost=band.n_ghost)
            level['computed'], level['errors'] = self._match_level(
                res, res.filter)
            if inputs.condition:
                op = ops.M if inputs.operator == 'stabilized' else ops.M_tilde
                level['kappa'] = condition_number_2norm(op)
        # bad inputs abort the study, numerical failures only the level
        except ConfigurationError:
            raise
        except CPMError as err:
            _LOGGER.warning('Level dx=%.6g failed: %s', dx, err)
            level['failed'] = True

        return level

    def _condition_only_level(self, dx):
        inputs = self.inputs
        level = dict(dx=dx, m=0, n_ghost=0, computed=np.empty(0),
                     errors=np.empty(0), kappa=np.nan, failed=False)
        try:
            band, ops = discretize_level(
                self.surface, dx, p=inputs.p, q=inputs.q, bc=inputs.bc,
                keep_seed=inputs.keep_seed, max_nodes=inputs.max_nodes,
                n_proc=inputs.n_proc)
            op = ops.M if inputs.operator == 'stabilized' else ops.M_tilde
            level.update(m=band.m, n_ghost=band.n_ghost,
                         kappa=condition_number_2norm(op))
        except ConfigurationError:
            raise
        except CPMError as err:
            _LOGGER.warning('Level dx=%.6g failed: %s', dx, err)
            level['failed'] = True
        return level

    def run(self, spectra=True):
        """
        Solves every level and assembles the report

        Parameters
        ----------
        spectra : bool, optional
            Whether eigenvalues are computed; if False only band sizes and
            condition numbers are. Default: True

        Returns
        -------
        report : :obj:`~.structures.StudyReport`
        """

        dxs = list(self.inputs.dx_list)
        single = (self.__class__._single_level if spectra
                  else self.__class__._condition_only_level)
        n_par = self.inputs.n_proc or 1
        gen = utils.trange(len(dxs), verbose=self.inputs.verbose,
                           desc='Levels')

        # batches of n_proc levels keep the progress bar moving
        levels = []
        with utils.get_par_func(self.inputs.n_proc, single) as (par, func):
            for start in range(0, len(dxs), n_par):
                batch = dxs[start:start + n_par]
                levels += par(func(self, dx) for dx in batch)
                gen.update(len(batch))
        gen.close()

        return self._report(levels, spectra)

    def _report(self, levels, spectra):
        dx = np.array([lv['dx'] for lv in levels], dtype=float)
        failed = np.array([lv['failed'] for lv in levels], dtype=bool)
        T = len(self.tracked) if spectra else 0
        computed = np.array([lv['computed'] for lv in levels],
                            dtype=float).reshape(len(levels), T)
        errors = np.array([lv['errors'] for lv in levels],
                          dtype=float).reshape(len(levels), T)

        orders = np.full(T, np.nan)
        ok = ~failed
        if T and ok.sum() >= 3:
            # each eigenvalue is fitted over the levels that matched it
            orders = observed_order(errors[ok], dx[ok], min_levels=3)
        elif T:
            warnings.warn('Observed orders need three or more successful '
                          'levels; {} available.'.format(ok.sum()),
                          stacklevel=3)
        if T and np.any(np.isnan(errors[ok])):
            warnings.warn('Some tracked eigenvalues had no computed match.',
                          stacklevel=3)

        return StudyReport(
            dx=dx,
            m=np.array([lv['m'] for lv in levels], dtype=int),
            n_ghost=np.array([lv['n_ghost'] for lv in levels], dtype=int),
            lambda_analytic=(self.tracked if spectra else np.empty(0)),
            lambda_computed=computed, abs_err=errors,
            orders=np.asarray(orders, dtype=float),
            kappa=np.array([lv['kappa'] for lv in levels], dtype=float),
            failed=failed, inputs=self.inputs)


def run_study(inputs=None, spectra=True, **kwargs):
    _LOGGER.info('Starting study')
    inputs = CPMInputs(**kwargs) if inputs is None else inputs
    report = ConvergenceStudy(inputs).run(spectra=spectra)
    _LOGGER.info('Study finished: %d levels, %d failed', len(report.dx),
                 int(report.failed.sum()))
    return report


run_study.__doc__ = """
Runs a convergence (or conditioning) study over several grid spacings

Each level builds the band and operators, solves the eigenproblem,
filters spurious modes and matches the tracked analytic eigenvalues;
failed levels are marked instead of aborting the study.

Parameters
----------
inputs : :obj:`~.structures.CPMInputs`, optional
    Prebuilt inputs; otherwise `kwargs` are used
spectra : bool, optional
    Whether to compute spectra; if False only band sizes and condition
    numbers are reported. Default: True
{surface_params}
{discretization}
{boundary}
{solver}
{study}
{proc_options}

Returns
-------
report : :obj:`~.structures.StudyReport`
    Per-level band sizes, errors and condition numbers with observed
    orders
""".format(**_cpm_input_docs)
