# -*- coding: utf-8 -*-
"""
Functions for saving and loading CPM data objects and writing artifacts
"""

import logging
import os

import h5py
import numpy as np
import pandas as pd
from scipy import io as sio
from scipy import sparse

from .errors import DomainError
from .eig import filter_reasons
from .structures import SpectralResult, StudyReport

_LOGGER = logging.getLogger(__name__)

_KINDS = {'study': StudyReport, 'spectrum': SpectralResult}
_FLOAT_FORMAT = '%.12g'


def _prepare_path(fname):
    """ Creates the parent directory of `fname` and returns it as str """
    fname = os.fspath(fname)
    directory = os.path.dirname(os.path.abspath(fname))
    os.makedirs(directory, exist_ok=True)
    return fname


def _hdf5_name(fname):
    fname = os.fspath(fname)
    return fname if fname.endswith('.hdf5') else fname + '.hdf5'


def _write_group(group, mapping):
    """
    Writes `mapping` into the HDF5 `group`

    Arrays become datasets and nested mappings become subgroups. Everything
    else is stored as an attribute, with None written as the string 'None'
    and lists of strings as variable-length string arrays.
    """

    for key, item in mapping.items():
        if isinstance(item, dict):
            _write_group(group.create_group(key), item)
        elif isinstance(item, np.ndarray):
            group.create_dataset(key, data=item)
        elif item is None:
            group.attrs[key] = 'None'
        elif (isinstance(item, (list, tuple))
              and all(isinstance(i, str) for i in item)):
            group.attrs.create(key, list(item), dtype=h5py.string_dtype())
        else:
            group.attrs[key] = item


def _read_attr(value):
    if isinstance(value, str) and value == 'None':
        return None
    if isinstance(value, np.ndarray) and value.dtype == object:
        return [v.decode() if isinstance(v, bytes) else str(v)
                for v in value]
    return value


def _read_group(group):
    """ Reads an HDF5 `group` written by :func:`_write_group` into a dict """
    out = {key: (item[()] if isinstance(item, h5py.Dataset)
                 else _read_group(item))
           for key, item in group.items()}
    out.update((key, _read_attr(value))
               for key, value in group.attrs.items())
    return out


def save_results(fname, results):
    """
    Saves a study report or spectral result to the HDF5 file `fname`

    The '.hdf5' suffix is appended when missing. The file records which kind
    of container was saved so :func:`load_results` can rebuild it.

    Parameters
    ----------
    fname : str or os.PathLike
        Output path
    results : :obj:`~.structures.StudyReport` or `SpectralResult`
        Results to save

    Returns
    -------
    fname : str
        Path of the written file
    """

    kind = 'study' if isinstance(results, StudyReport) else 'spectrum'
    fname = _hdf5_name(fname)
    with h5py.File(_prepare_path(fname), 'w') as h5:
        # kind tells load_results which structure to rebuild
        h5.attrs['kind'] = kind
        _write_group(h5.create_group('results'), results)

    _LOGGER.info('Saved %s results to %s', kind, fname)
    return fname


def load_results(fname):
    """
    Loads results written by :func:`save_results`

    Parameters
    ----------
    fname : str or os.PathLike
        Path of the file; '.hdf5' is appended when missing

    Returns
    -------
    results : :obj:`~.structures.StudyReport` or `SpectralResult`
        Container of the kind that was saved

    Raises
    ------
    TypeError
        If `fname` is not an HDF5 file
    """

    fname = _hdf5_name(fname)
    if not h5py.is_hdf5(fname):
        raise TypeError('Provided file {} is not valid HDF5 format.'
                        .format(fname))

    with h5py.File(fname, 'r') as h5:
        kind = h5.attrs.get('kind', 'spectrum')
        if isinstance(kind, bytes):
            kind = kind.decode()
        return _KINDS[kind](**_read_group(h5['results']))


def read_off(fname, reference=None):
    """
    Reads an ASCII OFF triangle mesh

    Lines starting with '#' and trailing comments are ignored.

    Parameters
    ----------
    fname : str
        Path to OFF file
    reference : {'sphere', None}, optional
        Analytic reference attached to the mesh. Default: None

    Returns
    -------
    mesh : :obj:`~.geometry.trimesh.TriMesh`

    Raises
    ------
    DomainError
        If the file is malformed or contains non-triangular faces
    """

    from .geometry import TriMesh

    with open(fname, 'r') as src:
        tokens = [line.split('#', 1)[0].split() for line in src]
    tokens = [t for t in tokens if t]
    if not tokens or not tokens[0][0].upper().endswith('OFF'):
        raise DomainError('{} is not an OFF file.'.format(fname))

    # counts may share the line with the OFF keyword
    header = tokens[0][1:] or tokens[1]
    start = 1 if tokens[0][1:] else 2
    try:
        n_vert, n_face = int(header[0]), int(header[1])
    except (IndexError, ValueError):
        raise DomainError('Malformed OFF header in {}.'.format(fname))

    body = tokens[start:]
    if len(body) < n_vert + n_face:
        raise DomainError('OFF file {} declares {} vertices and {} faces but '
                          'holds {} records.'.format(fname, n_vert, n_face,
                                                     len(body)))
    vertices = np.array([[float(v) for v in row[:3]]
                         for row in body[:n_vert]])
    faces = []
    for row in body[n_vert:n_vert + n_face]:
        if int(row[0]) != 3:
            raise DomainError('Only triangular faces are supported; found a '
                              'face with {} vertices.'.format(row[0]))
        faces.append([int(v) for v in row[1:4]])

    _LOGGER.info('Read mesh with %d vertices and %d triangles from %s',
                 n_vert, n_face, fname)
    return TriMesh(vertices, np.array(faces, dtype=int).reshape(-1, 3),
                   reference=reference)


def write_off(fname, mesh):
    """
    Writes triangle `mesh` as ASCII OFF

    Parameters
    ----------
    fname : str
        Output path
    mesh : :obj:`~.geometry.trimesh.TriMesh`

    Returns
    -------
    fname : str
    """

    fname = _prepare_path(fname)
    with open(fname, 'w') as dest:
        dest.write('OFF\n{} {} 0\n'.format(len(mesh.vertices),
                                            len(mesh.triangles)))
        for vert in mesh.vertices:
            dest.write('{!r} {!r} {!r}\n'.format(*map(float, vert)))
        for tri in mesh.triangles:
            dest.write('3 {} {} {}\n'.format(*map(int, tri)))
    return fname


def write_vtk_points(fname, points, values, name='mode'):
    """
    Writes scalar `values` at `points` as a legacy ASCII VTK point cloud

    Parameters
    ----------
    fname : str
        Output path
    points : (N, d) array_like
        Point coordinates; 2D points are padded with z = 0
    values : (N,) array_like
        Scalar value at each point
    name : str, optional
        Name of the scalar field. Default: 'mode'

    Returns
    -------
    fname : str
    """

    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float).ravel()
    if len(points) != len(values):
        raise DomainError('Expected one value per point, received {} values '
                          'for {} points.'.format(len(values), len(points)))
    if points.shape[1] < 3:
        points = np.column_stack([points, np.zeros((len(points),
                                                    3 - points.shape[1]))])

    n = len(points)
    fname = _prepare_path(fname)
    with open(fname, 'w') as dest:
        dest.write('# vtk DataFile Version 3.0\n')
        dest.write('{} point cloud\n'.format(name))
        dest.write('ASCII\nDATASET POLYDATA\n')
        dest.write('POINTS {} float\n'.format(n))
        for pt in points:
            dest.write('%.12e %.12e %.12e\n' % tuple(pt))
        # one vertex cell per point so viewers draw the cloud
        dest.write('VERTICES {} {}\n'.format(n, 2 * n))
        for i in range(n):
            dest.write('1 {}\n'.format(i))
        dest.write('POINT_DATA {}\nSCALARS {} float 1\nLOOKUP_TABLE '
                   'default\n'.format(n, name))
        for val in values:
            dest.write('%.12e\n' % val)
    return fname


def write_matrix_market(fname, op, comment=''):
    """
    Writes sparse `op` as a coordinate real general Matrix Market file

    Parameters
    ----------
    fname : str
        Output path
    op : sparse matrix
    comment : str, optional
        Comment stored in the header. Default: ''

    Returns
    -------
    fname : str
    """

    fname = _prepare_path(fname)
    if not fname.endswith('.mtx'):
        fname += '.mtx'
    sio.mmwrite(fname, sparse.coo_matrix(op), comment=comment,
                field='real', symmetry='general')
    return fname


def _write_frame(fname, frame, **kwargs):
    fname = _prepare_path(fname)
    frame.to_csv(fname, index=False, float_format=_FLOAT_FORMAT, na_rep='nan',
                 **kwargs)
    _LOGGER.debug('Wrote %d rows to %s', len(frame), fname)
    return fname


def write_band_csv(fname, band):
    """
    Writes the nodes of `band` with their closest points

    Columns are idx, i, j[, k], cpx, cpy[, cpz], dist, ghost.

    Parameters
    ----------
    fname : str
        Output path
    band : :obj:`~.band.Band`

    Returns
    -------
    fname : str
    """

    axes = 'ijk'[:band.dim]
    frame = pd.DataFrame({'idx': np.arange(band.m)})
    for n, ax in enumerate(axes):
        frame[ax] = band.nodes[:, n]
    for n, ax in enumerate('xyz'[:band.dim]):
        frame['cp' + ax] = band.cp[:, n]
    frame['dist'] = band.distance
    frame['ghost'] = band.ghost.astype(int)
    return _write_frame(fname, frame)


def write_spectrum_csv(fname, res):
    """
    Writes eigenvalues of `res` with their filter decisions

    Columns are idx, re, im, residual, kept, reason.

    Parameters
    ----------
    fname : str
        Output path
    res : :obj:`~.structures.SpectralResult`
        Eigenpairs, filtered or not

    Returns
    -------
    fname : str
    """

    vals = np.asarray(res.eigenvalues)
    n = len(vals)
    residuals = res.get('residuals')
    report = res.get('filter')
    if report is not None and report.get('kept') is not None:
        reasons = filter_reasons(report, n)
    else:
        reasons = np.full(n, '', dtype=object)

    frame = pd.DataFrame({
        'idx': np.arange(n),
        're': vals.real,
        'im': vals.imag,
        'residual': (np.full(n, np.nan) if residuals is None
                     else np.asarray(residuals, dtype=float)),
        'kept': (reasons == '').astype(int),
        'reason': reasons
    })
    return _write_frame(fname, frame)


def write_histogram(fname, counts, edges):
    """
    Writes histogram bins as whitespace separated columns

    Columns are left edge, right edge, center and count.

    Parameters
    ----------
    fname : str
        Output path
    counts : (B,) array_like
    edges : (B + 1,) array_like

    Returns
    -------
    fname : str
    """

    edges = np.asarray(edges, dtype=float)
    frame = pd.DataFrame({
        '#left': edges[:-1],
        'right': edges[1:],
        'center': 0.5 * (edges[:-1] + edges[1:]),
        'count': np.asarray(counts, dtype=int)
    })
    return _write_frame(fname, frame, sep=' ')


def write_study_csv(fname, report):
    """
    Writes one row per level and tracked eigenvalue of a study

    Columns are dx, m, lambda_analytic, lambda_computed, abs_err.

    Parameters
    ----------
    fname : str
        Output path
    report : :obj:`~.structures.StudyReport`

    Returns
    -------
    fname : str
    """

    dx = np.asarray(report.dx, dtype=float)
    m = np.asarray(report.m)
    analytic = np.asarray(report.lambda_analytic, dtype=float)
    computed = np.asarray(report.lambda_computed, dtype=float)
    err = np.asarray(report.abs_err, dtype=float)
    n_lev, n_track = len(dx), len(analytic)

    frame = pd.DataFrame({
        'dx': np.repeat(dx, n_track),
        'm': np.repeat(m, n_track),
        'lambda_analytic': np.tile(analytic, n_lev),
        'lambda_computed': computed.reshape(-1),
        'abs_err': err.reshape(-1)
    })
    return _write_frame(fname, frame)


def write_loglog(fname, dx, errors):
    """
    Writes a two-column (dx, error) data file for a log-log plot

    Parameters
    ----------
    fname : str
        Output path
    dx : (L,) array_like
    errors : (L,) array_like

    Returns
    -------
    fname : str
    """

    frame = pd.DataFrame({'#dx': np.asarray(dx, dtype=float),
                          'error': np.asarray(errors, dtype=float)})
    return _write_frame(fname, frame, sep=' ')


def write_condition_csv(fname, report):
    """
    Writes the condition number table of a study

    Parameters
    ----------
    fname : str
        Output path
    report : :obj:`~.structures.StudyReport`

    Returns
    -------
    fname : str
    """

    kappa = report.get('kappa')
    n = len(report.dx)
    frame = pd.DataFrame({
        'dx': np.asarray(report.dx, dtype=float),
        'm': np.asarray(report.m),
        'kappa': (np.full(n, np.nan) if kappa is None
                  else np.asarray(kappa, dtype=float))
    })
    return _write_frame(fname, frame)


def write_modes_csv(fname, indices, eigenvalues):
    """
    Writes the eigenvalues of exported modes

    Columns are idx, re, im; row ``n`` describes mode file ``n``.

    Parameters
    ----------
    fname : str
        Output path
    indices : (N,) array_like
        Indices of the modes in the spectrum
    eigenvalues : (N,) array_like
        Eigenvalues of the modes

    Returns
    -------
    fname : str
    """

    vals = np.asarray(eigenvalues)
    frame = pd.DataFrame({'idx': np.asarray(indices, dtype=int),
                          're': vals.real, 'im': vals.imag})
    return _write_frame(fname, frame)
