__all__ = [
    'available_experiments', 'experiment_config', 'load_experiment',
    'query_experiment'
]

from .experiments import (available_experiments, experiment_config,
                          load_experiment, query_experiment)
