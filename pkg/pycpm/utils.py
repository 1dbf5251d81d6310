# -*- coding: utf-8 -*-

import os
import warnings
from contextlib import contextmanager
from multiprocessing import cpu_count

import numpy as np
import tqdm
from sklearn.utils import Bunch
try:
    from joblib import Parallel, delayed
    joblib_avail = True
except ImportError:
    joblib_avail = False

_BAR_FORMAT = '{desc} {n_fmt}/{total_fmt} |{bar}| {elapsed}<{remaining}'


class ResDict(Bunch):
    """
    Attribute-access container that only stores the keys in `cls.allowed`

    Assignments to other keys are ignored. Printing lists the populated keys;
    equality compares populated keys numerically, recursing into nested
    containers.
    """

    allowed = []

    def __init__(self, **kwargs):
        super().__init__(**{key: val for key, val in kwargs.items()
                            if key in self.__class__.allowed})

    def __str__(self):
        filled = _filled_keys(self)
        return '{}({})'.format(
            self.__class__.__name__,
            ', '.join(k for k in self.__class__.allowed if k in filled))

    # unknown keys are dropped silently
    def __setitem__(self, key, val):
        if key in self.__class__.allowed:
            super().__setitem__(key, val)

    def __eq__(self, value):
        if not isinstance(value, self.__class__):
            return False
        # unset entries do not count
        keys = _filled_keys(self)
        if keys != _filled_keys(value):
            return False
        return all(_items_equal(self[k], value[k]) for k in keys)

    def __ne__(self, value):
        return not self == value

    __repr__ = __str__


def _items_equal(first, second):
    """
    Compares two stored items, numerically when possible

    Parameters
    ----------
    first, second
        Containers, arrays, scalars, strings or sequences of strings

    Returns
    -------
    equal : bool
        Whether `first` and `second` hold the same data
    """

    if isinstance(first, dict) and isinstance(second, dict):
        return first == second
    if isinstance(first, (str, bytes)) or isinstance(second, (str, bytes)):
        return _as_text(first) == _as_text(second)

    a, b = np.asarray(first), np.asarray(second)
    if a.dtype.kind in 'biufc' and b.dtype.kind in 'biufc':
        try:
            np.testing.assert_array_almost_equal(a, b)
        except AssertionError:
            return False
        return True

    # strings stored as object arrays by h5py
    if a.shape != b.shape:
        return False
    return all(_as_text(x) == _as_text(y)
               for x, y in zip(a.ravel(), b.ravel()))


def _as_text(item):
    if isinstance(item, bytes):
        return item.decode('utf-8')
    return str(item)


def _filled_keys(mapping):
    """
    Returns the keys of `mapping` holding something other than None or {}

    Parameters
    ----------
    mapping : dict

    Returns
    -------
    keys : set

    Raises
    ------
    TypeError
        If `mapping` is not a dictionary
    """

    if not isinstance(mapping, dict):
        raise TypeError('Expected a dictionary, got {}'
                        .format(type(mapping).__name__))
    return {key for key, value in mapping.items()
            if value is not None and not _is_empty_mapping(value)}


def _is_empty_mapping(obj):
    """ Whether `obj` is a dictionary-like object without keys """
    keys = getattr(obj, 'keys', None)
    return callable(keys) and len(keys()) == 0


def trange(n_iter, verbose=True, **kwargs):
    """
    Returns a :obj:`tqdm.tqdm` progress bar over ``range(n_iter)``

    The bar is silent when `verbose` is False. Keyword arguments override the
    ascii, non-persistent defaults.
    """

    options = dict(ascii=True, leave=False, bar_format=_BAR_FORMAT)
    options.update(kwargs)
    return tqdm.trange(n_iter, disable=not verbose, **options)


def get_n_proc(n_proc=None):
    """
    Resolves the number of workers requested by `n_proc`

    Parameters
    ----------
    n_proc : {int, 'max', None}, optional
        Requested number of workers. 'max' or -1 uses all CPUs and other
        negative values count back from that. If None, the ``CPM_THREADS``
        environmental variable is consulted. Default: None

    Returns
    -------
    n_proc : int or None
        Number of workers, or None for serial execution
    """

    if n_proc is None:
        env = os.environ.get('CPM_THREADS', '').strip()
        if not env:
            return None
        n_proc = int(env)

    # negative counts are relative to the CPU count
    if n_proc == 'max' or n_proc == -1:
        return cpu_count()
    n_proc = int(n_proc)
    if n_proc < 0:
        return max(1, cpu_count() + 1 + n_proc)
    if n_proc <= 1:
        return None

    return n_proc


def chunk_slices(n_items, chunk_size):
    """
    Splits ``range(n_items)`` into consecutive slices of `chunk_size`

    Parameters
    ----------
    n_items : int
        Number of items to split
    chunk_size : int
        Maximum number of items per slice

    Returns
    -------
    slices : list of slice
    """

    chunk_size = max(1, int(chunk_size))
    return [slice(start, min(start + chunk_size, n_items))
            for start in range(0, n_items, chunk_size)]


def _serial_map(calls):
    return list(calls)


@contextmanager
def get_par_func(n_proc, func, **kwargs):
    """
    Yields a ``(parallel, func)`` pair that maps `func` over a generator

    ``parallel(func(x) for x in items)`` returns the list of results. With
    joblib installed and more than one worker, `parallel` is a
    :obj:`joblib.Parallel` pool and `func` is wrapped in
    :func:`joblib.delayed`; otherwise calls run serially in order.

    Parameters
    ----------
    n_proc : {int, 'max', None}
        Requested number of workers, resolved with :func:`get_n_proc`
    func : callable
        Function to map
    kwargs
        Key-value arguments provided to :obj:`joblib.Parallel` (e.g.,
        ``prefer='threads'``)
    """

    n_proc = get_n_proc(n_proc)
    if n_proc is not None and n_proc > 1 and not joblib_avail:
        warnings.warn('Setting n_proc > 1 requires the joblib module. '
                      'Consider installing joblib if you would like '
                      'parallelization. Running serially for now.')
    if not joblib_avail or n_proc is None:
        yield _serial_map, func
        return
    with Parallel(n_jobs=n_proc, **kwargs) as parallel:
        yield parallel, delayed(func)
