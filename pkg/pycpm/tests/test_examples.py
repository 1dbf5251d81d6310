# -*- coding: utf-8 -*-

import pytest
import pycpm.examples
from pycpm.cli import COMMANDS
from pycpm.geometry import SURFACE_KINDS
from pycpm.structures import CPMInputs

EXPERIMENTS = [
    'semicircle_spectrum', 'egg_convergence_q2', 'egg_convergence_q4',
    'cosine_neumann_naive', 'cosine_neumann_cpbar', 'cosine_dirichlet_q2',
    'cosine_dirichlet_q4', 'cosine_conditioning', 'segment_conditioning',
    'circle_spectrum', 'hemisphere_neumann', 'l_shape_dirichlet',
    'triangulated_sphere', 'mobius_dirichlet'
]


def test_available_experiments():
    # make sure we get a list of strings when called with no arguments
    avail = pycpm.examples.available_experiments()
    assert isinstance(avail, list)
    assert all([isinstance(f, str) for f in avail])

    # check that we get all expected experiments back
    assert len(set(EXPERIMENTS) - set(avail)) == 0

    # check that we can supply experiment names to confirm validity
    for f in EXPERIMENTS:
        assert f == pycpm.examples.available_experiments(f)

    # check that providing non-valid experiment name errors
    for f in ['thisisnotanexperiment', 10]:
        with pytest.raises(ValueError):
            pycpm.examples.available_experiments(f)


@pytest.mark.parametrize('experiment', EXPERIMENTS)
def test_query_experiment(experiment):
    # check that default return string (description)
    assert isinstance(pycpm.examples.query_experiment(experiment), str)
    # check that supplying None returns all available keys
    keys = pycpm.examples.query_experiment(experiment, None)
    assert {'description', 'command', 'surface', 'dx_list'} <= set(keys)
    assert pycpm.examples.query_experiment(experiment, 'command') in COMMANDS
    # check nonsense keys
    for k in ['notakey', 10, 20.5132]:
        with pytest.raises(KeyError):
            pycpm.examples.query_experiment(experiment, k)


@pytest.mark.parametrize('experiment', EXPERIMENTS)
def test_load_experiment(experiment):
    config = pycpm.examples.experiment_config(experiment)
    assert 'description' not in config and 'command' not in config

    inputs = pycpm.examples.load_experiment(experiment)
    assert isinstance(inputs, CPMInputs)
    assert inputs.surface in SURFACE_KINDS
    assert len(inputs.dx_list) >= 1

    inputs = pycpm.examples.load_experiment(experiment, k_eigs=4,
                                            verbose=False)
    assert inputs.k_eigs == 4 and inputs.verbose is False
