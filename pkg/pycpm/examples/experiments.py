# -*- coding: utf-8 -*-
"""
Functions and utilities for getting packaged CPM experiment configurations
"""

import json
import os

from ..structures import CPMInputs

with open(os.path.join(os.path.dirname(__file__), 'experiments.json'),
          'r') as src:
    _EXPERIMENTS = json.load(src)


def available_experiments(name=None):
    """
    Lists available experiments

    Parameters
    ----------
    name : str, optional
        If provided, checks that `name` is an available experiment and
        returns it

    Returns
    -------
    experiments : list
        List of available experiments

    Raises
    ------
    ValueError
        If `name` is provided and is not an available experiment
    """

    if name is not None:
        if name not in _EXPERIMENTS.keys():
            raise ValueError('Provided experiment {} is not available. '
                             'Experiment must be one of: {}.'
                             .format(name, available_experiments()))
        else:
            return name

    return list(_EXPERIMENTS.keys())


def query_experiment(name, key='description'):
    """
    Queries experiment `name` for information specified by `key`

    Parameters
    ----------
    name : str
        Name of experiment. Must be in
        :func:`pycpm.examples.available_experiments()`
    key : str, optional
        Key to query from `name`. If None will return a list of available
        keys. Default: 'description'

    Returns
    -------
    value
        Value specified by `key` for experiment `name`
    """

    name = available_experiments(name)
    if key is None:
        return list(_EXPERIMENTS.get(name).keys())

    value = _EXPERIMENTS.get(name).get(key, None)
    if value is None:
        raise KeyError('Provided key {} not specified for experiment {}. '
                       'Available keys are {}'
                       .format(key, name, list(_EXPERIMENTS.get(name).keys())))

    return value


def experiment_config(name):
    """
    Returns the raw configuration of experiment `name`

    Only keys understood by :obj:`~.structures.CPMInputs` are returned.

    Parameters
    ----------
    name : str
        Name of experiment

    Returns
    -------
    config : dict
    """

    name = available_experiments(name)
    return {key: value for key, value in _EXPERIMENTS[name].items()
            if key in CPMInputs.allowed}


def load_experiment(name, **overrides):
    """
    Loads experiment `name` into a :obj:`~.structures.CPMInputs` object

    Parameters
    ----------
    name : str
        Name of experiment. Must be in
        :func:`pycpm.examples.available_experiments()`
    overrides
        Input values replacing those of the packaged configuration

    Returns
    -------
    inputs : :obj:`~.structures.CPMInputs`
        Inputs ready to pass to :func:`pycpm.run_study` or the command line
        drivers
    """

    config = experiment_config(name)
    config.update(overrides)
    return CPMInputs(**config)
