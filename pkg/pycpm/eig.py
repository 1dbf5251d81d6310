# -*- coding: utf-8 -*-
"""
Spectra of CPM operators: dense and shift-invert solvers, spurious mode
filtering, and conditioning
"""

import logging
import warnings

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as splinalg

from .discretize import _extension_chunk
from .errors import ConfigurationError, NumericError
from .structures import FilterReport, SpectralResult

_LOGGER = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8


def _negated(op):
    if sparse.issparse(op):
        return -sparse.csr_matrix(op)
    return -np.asarray(op)


def _residuals(A, vals, vecs):
    """ Relative residuals ``|A v - lambda v| / |v|`` of each pair """
    if len(vals) == 0:
        return np.empty(0)
    Av = A @ vecs
    num = np.linalg.norm(Av - vecs * vals[None], axis=0)
    return num / np.linalg.norm(vecs, axis=0)


def _sorted_result(A, vals, vecs, **kwargs):
    order = np.lexsort((vals.imag, vals.real))
    vals, vecs = vals[order], vecs[:, order]
    res = _residuals(A, vals, vecs)
    worst = res.max() if len(res) else 0.
    if worst > RESIDUAL_TOL:
        warnings.warn('Largest eigenpair residual {:.3g} exceeds {:.0e}.'
                      .format(worst, RESIDUAL_TOL), stacklevel=3)
    return SpectralResult(eigenvalues=vals, eigenvectors=vecs,
                          residuals=res, **kwargs)


def dense_spectrum(op, max_size=None):
    """
    Computes the full eigendecomposition of ``-op``

    Parameters
    ----------
    op : (m, m) sparse matrix or array_like
        Operator to decompose
    max_size : int, optional
        Largest accepted `m`. Default: None

    Returns
    -------
    result : :obj:`~.structures.SpectralResult`
        All ``m`` eigenpairs, sorted by real part

    Raises
    ------
    ConfigurationError
        If `op` is larger than `max_size`
    NumericError
        If the QR iteration does not converge
    """

    A = _negated(op)
    m = A.shape[0]
    if max_size is not None and m > max_size:
        raise ConfigurationError('Operator of size {} exceeds the dense '
                                 'solver limit of {}'.format(m, max_size))
    dense = A.toarray() if sparse.issparse(A) else A
    try:
        vals, vecs = linalg.eig(dense)
    except linalg.LinAlgError as err:
        raise NumericError('Dense eigendecomposition of a {0}x{0} operator '
                           'failed: {1}'.format(m, err)) from err

    _LOGGER.debug('Dense eigendecomposition of %dx%d operator', m, m)
    return _sorted_result(A, vals, vecs, method='dense', shift=0.)


def _factorize(A, shift):
    eye = sparse.identity(A.shape[0], format='csc')
    for sigma in (shift, shift + 1e-8):
        try:
            return splinalg.splu(sparse.csc_matrix(A - sigma * eye)), sigma
        except RuntimeError as err:
            warnings.warn('Sparse LU at shift {:.6g} failed ({}); '
                          'perturbing the shift.'.format(sigma, err),
                          stacklevel=3)
    raise NumericError('Sparse LU is singular at shift {} and at the '
                       'perturbed shift {}'.format(shift, shift + 1e-8))


def arnoldi_near_shift(op, k, shift=0., maxiter=300):
    """
    Finds the `k` eigenvalues of ``-op`` nearest `shift`

    Uses shift-invert Arnoldi: ``-op - shift I`` is factorized once, and
    ARPACK iterates on its inverse from a normalized all-ones start vector
    with a Krylov space of ``max(2 k + 10, 20)`` vectors.

    Parameters
    ----------
    op : (m, m) sparse matrix
        Operator to decompose
    k : int
        Number of eigenpairs; must be below ``m / 2``
    shift : float, optional
        Target of the search. Default: 0
    maxiter : int, optional
        Maximum number of implicit restarts. Default: 300

    Returns
    -------
    result : :obj:`~.structures.SpectralResult`
        `k` eigenpairs, sorted by real part

    Raises
    ------
    ConfigurationError
        If `k` is not below ``m / 2``
    NumericError
        If the factorization is singular or ARPACK does not converge
    """

    A = sparse.csr_matrix(_negated(op))
    m = A.shape[0]
    k = int(k)
    if not 0 < k < m / 2:
        raise ConfigurationError('Arnoldi needs 0 < k < m/2; got k={} for '
                                 'm={}'.format(k, m))

    lu, sigma = _factorize(A, float(shift))
    # shift-invert: largest mu of (A - sigma)^-1 are closest to sigma
    inverse = splinalg.LinearOperator((m, m), matvec=lu.solve,
                                      dtype=np.float64)
    ncv = min(m - 1, max(2 * k + 10, 20))
    # fixed start vector keeps runs reproducible
    v0 = np.ones(m) / np.sqrt(m)
    try:
        mu, vecs = splinalg.eigs(inverse, k=k, which='LM', ncv=ncv,
                                 maxiter=maxiter, v0=v0)
    except splinalg.ArpackNoConvergence as err:
        raise NumericError('Arnoldi did not converge within {} restarts; {} '
                           'of {} pairs converged'
                           .format(maxiter, len(err.eigenvalues), k)) from err
    except splinalg.ArpackError as err:
        raise NumericError('Arnoldi failed: {}'.format(err)) from err

    vals = sigma + 1. / mu
    _LOGGER.debug('Arnoldi found %d eigenvalues near %.6g (m=%d, ncv=%d)',
                  k, sigma, m, ncv)
    return _sorted_result(A, vals, vecs, method='arnoldi', shift=sigma)


def compute_spectrum(op, k=20, shift=0., method='auto', dense_max=4000):
    """
    Computes eigenpairs of ``-op`` with the dense or the Arnoldi solver

    Parameters
    ----------
    op : (m, m) sparse matrix
        Operator to decompose
    k : int, optional
        Number of eigenpairs for the Arnoldi solver. Default: 20
    shift : float, optional
        Arnoldi shift. Default: 0
    method : {'auto', 'dense', 'arnoldi'}, optional
        Solver; 'auto' picks the dense solver when ``m <= dense_max``.
        Default: 'auto'
    dense_max : int, optional
        Largest operator handed to the dense solver. Default: 4000

    Returns
    -------
    result : :obj:`~.structures.SpectralResult`
    """

    m = op.shape[0]
    if method == 'auto':
        method = 'dense' if m <= dense_max else 'arnoldi'
    if method == 'dense':
        return dense_spectrum(op, max_size=dense_max)
    if method == 'arnoldi':
        return arnoldi_near_shift(op, k, shift=shift)
    raise ConfigurationError('Unknown eigensolver {!r}'.format(method))


def filter_spurious(res, dx, d, imag_tol=1e-6, cutoff_window=None):
    """
    Separates physical eigenvalues from spurious ones

    Eigenvalues within `cutoff_window` of ``2 d / dx**2`` are discarded as
    near-cutoff; of the rest, those with ``|Im| > imag_tol * max(1, |Re|)``
    are discarded as complex. The report is also stored on `res`.

    Parameters
    ----------
    res : :obj:`~.structures.SpectralResult`
        Eigenpairs to filter
    dx : float
        Grid spacing
    d : int
        Embedding dimension
    imag_tol : float, optional
        Relative imaginary part tolerance. Default: 1e-6
    cutoff_window : float, optional
        Half-width of the discarded window. Default: ``d / dx**2``

    Returns
    -------
    report : :obj:`~.structures.FilterReport`
    """

    vals = np.asarray(res.eigenvalues)
    # magnitude of the Laplacian diagonal, where spurious values gather
    cutoff = 2. * d / dx ** 2
    window = 0.5 * cutoff if cutoff_window is None else float(cutoff_window)

    near = np.abs(vals - cutoff) < window
    cplx = ~near & (np.abs(vals.imag)
                    > imag_tol * np.maximum(1., np.abs(vals.real)))
    report = FilterReport(kept=np.flatnonzero(~near & ~cplx),
                          discarded_near_cutoff=np.flatnonzero(near),
                          discarded_complex=np.flatnonzero(cplx),
                          cutoff=cutoff, window=window)
    res.filter = report
    _LOGGER.debug('Kept %d of %d eigenvalues (%d near cutoff %.4g, %d '
                  'complex)', len(report.kept), len(vals), near.sum(),
                  cutoff, cplx.sum())
    return report


def filter_reasons(report, n):
    """
    Returns the discard reason of each of `n` eigenvalues

    Parameters
    ----------
    report : :obj:`~.structures.FilterReport`
    n : int
        Number of eigenvalues the report covers

    Returns
    -------
    reasons : (n,) `numpy.ndarray`
        '' for kept values, else 'near_cutoff' or 'complex'
    """

    reasons = np.full(n, '', dtype=object)
    reasons[np.asarray(report.discarded_near_cutoff, dtype=int)] = \
        'near_cutoff'
    reasons[np.asarray(report.discarded_complex, dtype=int)] = 'complex'
    return reasons


def condition_number_2norm(op, tol=1e-6, dense_max=200):
    """
    Estimates the 2-norm condition number of `op`

    Small operators use their singular values directly. Otherwise the
    largest singular value comes from Lanczos iterations on ``op.T @ op``
    and the smallest from Lanczos iterations on the inverse of
    ``op @ op.T``, applied through a sparse LU factorization.

    Parameters
    ----------
    op : (m, m) sparse matrix or array_like
        Square operator
    tol : float, optional
        Relative tolerance of the iterations. Default: 1e-6
    dense_max : int, optional
        Largest operator handled with dense singular values. Default: 200

    Returns
    -------
    kappa : float
        Condition number, or ``inf`` for singular operators
    """

    A = sparse.csc_matrix(op)
    m = A.shape[0]
    if A.shape[1] != m:
        raise ConfigurationError('Condition number needs a square operator, '
                                 'got shape {}'.format(A.shape))

    if m <= dense_max:
        s = linalg.svdvals(A.toarray())
        if s[-1] == 0:
            warnings.warn('Operator is singular.', stacklevel=2)
            return np.inf
        return float(s[0] / s[-1])

    try:
        lu = splinalg.splu(A)
    except RuntimeError as err:
        warnings.warn('Operator is singular ({}).'.format(err), stacklevel=2)
        return np.inf

    # largest singular value of A and of its inverse via the normal
    # equations
    AT = A.T.tocsr()
    v0 = np.ones(m) / np.sqrt(m)
    normal = splinalg.LinearOperator((m, m), dtype=np.float64,
                                     matvec=lambda x: AT @ (A @ x))
    inverse = splinalg.LinearOperator(
        (m, m), dtype=np.float64,
        matvec=lambda x: lu.solve(lu.solve(x), trans='T'))
    try:
        smax2 = splinalg.eigsh(normal, k=1, which='LA', tol=tol, v0=v0,
                               return_eigenvectors=False)[0]
        smin2_inv = splinalg.eigsh(inverse, k=1, which='LA', tol=tol, v0=v0,
                                   return_eigenvectors=False)[0]
    except splinalg.ArpackError as err:
        raise NumericError('Condition number iterations failed: {}'
                           .format(err)) from err

    if not np.isfinite(smin2_inv):
        warnings.warn('Operator is numerically singular.', stacklevel=2)
        return np.inf
    return float(np.sqrt(smax2 * smin2_inv))


def realify(vecs):
    """
    Rotates complex eigenvectors to be as real as possible

    Parameters
    ----------
    vecs : (m,) or (m, N) array_like
        Eigenvectors

    Returns
    -------
    real : `numpy.ndarray`
        Real parts after removing the common phase of each vector
    """

    vecs = np.asarray(vecs)
    # eigenvectors are fixed up to a complex scale
    phase = 0.5 * np.angle((vecs ** 2).sum(axis=0))
    return (vecs * np.exp(-1j * phase)).real


def sample_eigenfunction(res, band, grid, p, points, index=None):
    """
    Interpolates eigenvectors at surface `points`

    Parameters
    ----------
    res : :obj:`~.structures.SpectralResult`
        Eigenpairs over `band`
    band : :obj:`~.band.Band`
        Band the eigenvectors live on
    grid : :obj:`~.band.Grid`
        Grid of the band
    p : int
        Interpolation degree
    points : (N, d) array_like
        Points on (or within ``dx`` of) the surface
    index : int, optional
        Eigenvector to sample. Default: all of them

    Returns
    -------
    values : (N,) or (N, K) `numpy.ndarray`

    Raises
    ------
    DomainError
        If a footprint of `points` is not contained in the band
    """

    vecs = np.asarray(res.eigenvectors)
    if index is not None:
        vecs = vecs[:, index]
    cols, weights = _extension_chunk(band, grid, np.atleast_2d(points), p)
    if vecs.ndim == 1:
        return (weights * vecs[cols]).sum(axis=1)
    return np.einsum('nf,nfk->nk', weights, vecs[cols])


def histogram_real(res, bins=50):
    """
    Histogram of the real parts of all computed eigenvalues

    Kept and discarded eigenvalues are counted together.

    Parameters
    ----------
    res : :obj:`~.structures.SpectralResult`
    bins : int, optional
        Number of bins. Default: 50

    Returns
    -------
    counts : (bins,) `numpy.ndarray`
    edges : (bins + 1,) `numpy.ndarray`
    """

    return np.histogram(np.asarray(res.eigenvalues).real, bins=bins)


def cluster_eigenvalues(values, window):
    """
    Groups eigenvalues into multiplets

    Consecutive (sorted by real part) values closer than `window` belong to
    the same multiplet.

    Parameters
    ----------
    values : (N,) array_like
        Eigenvalues
    window : float
        Largest gap within a multiplet; usually ``10 * dx**2``

    Returns
    -------
    clusters : list of `numpy.ndarray`
        Indices into `values` of each multiplet, in ascending order
    """

    values = np.asarray(values)
    if len(values) == 0:
        return []
    order = np.argsort(values.real, kind='stable')
    gaps = np.abs(np.diff(values[order]))
    breaks = np.flatnonzero(gaps > window) + 1
    return np.split(order, breaks)


def select_modes(res, report=None, n_modes=None, target=None, window=None):
    """
    Chooses which kept eigenpairs to export

    Parameters
    ----------
    res : :obj:`~.structures.SpectralResult`
    report : :obj:`~.structures.FilterReport`, optional
        Filter decisions; defaults to ``res.filter`` or keeping everything
    n_modes : int, optional
        Number of lowest kept modes. Default: all kept modes
    target : float, optional
        If given, the multiplet whose eigenvalue is nearest `target` is
        selected instead. Default: None
    window : float, optional
        Multiplet window used with `target`. Default: 1e-6

    Returns
    -------
    indices : `numpy.ndarray`
        Indices into ``res.eigenvalues``, ascending by real part
    """

    vals = np.asarray(res.eigenvalues)
    report = report if report is not None else res.get('filter')
    if report is not None and report.get('kept') is not None:
        kept = np.asarray(report.kept, dtype=int)
    else:
        kept = np.arange(len(vals))
    kept = kept[np.argsort(vals[kept].real, kind='stable')]

    # return the whole multiplet around the target
    if target is not None and len(kept) > 0:
        window = 1e-6 if window is None else window
        for cluster in cluster_eigenvalues(vals[kept], window):
            members = kept[cluster]
            if np.any(members == kept[np.argmin(np.abs(vals[kept]
                                                        - target))]):
                return np.sort(members)
    return kept if n_modes is None else kept[:int(n_modes)]
