"""Contains application data reader."""

import json
import os

from .config import config
from .main.case import EXPERIMENTS
from .main.errors import ConfigurationError, ParameterError
from .main.operators import OperatorModel, OperatorFamily
from .main.spaces import GridFunction, MultiplierFunction


class Reader():
    """Represents application data reader.

    Reader used to load models, families, multipliers and experiment
    configurations from JSON strings or files given by the user.
    """

    def read_json(self, source):
        """Get JSON object from a string or from a file path.

        Parameters
        ----------
        source : str
            JSON text or path to a file with JSON text.

        Returns
        -------
        value : Any
            Decoded JSON object.
        """
        if isinstance(source, (dict, list)):
            return source
        text = source
        if os.path.isfile(source):
            with open(source, encoding='utf-8') as file:
                text = file.read()
        try:
            return json.loads(text)
        except ValueError:
            message = f'no valid JSON found in {source[:40]!r}'
            raise ParameterError(message)

    def read_operator(self, source):
        """Get operator model from JSON {n, space_p, structure, entries}.

        Parameters
        ----------
        source : str or dict
            JSON text, file path or decoded descriptor.

        Returns
        -------
        model : OperatorModel
            The model with its structure checked.
        """
        return OperatorModel.from_json(self.read_json(source))

    def read_family(self, source, label='family'):
        """Get operator family from JSON array of {param, operator}."""
        return OperatorFamily.from_json(self.read_json(source), label)

    def read_multiplier(self, source):
        """Get multiplier from JSON {kind, params}."""
        descriptor = self.read_json(source)
        if not isinstance(descriptor, dict) or 'kind' not in descriptor:
            raise ParameterError('no multiplier kind found')
        return MultiplierFunction.from_json(descriptor)

    def read_grid_function(self, path):
        """Get grid function from CSV file written by GridFunction.dump."""
        if not os.path.isfile(path):
            raise ParameterError(f'no grid function file {path} found')
        return GridFunction.load(path)

    def read_experiment_config(self, source, experiment=None):
        """Get experiment configuration from flat key-value text.

        Parameters
        ----------
        source : str
            Text or path to a file with ``key = value`` lines.
        experiment : str, optional
            Experiment id given outside of the file, e.g. on the command
            line. It must match the id of the file when both are present.

        Returns
        -------
        configuration : smlab.config.Configuration
            Normalized options; ``experiment`` and ``seed`` are checked.
        """
        text = source
        if os.path.isfile(source):
            with open(source, encoding='utf-8') as file:
                text = file.read()
        try:
            configuration = config.parse(text)
        except Exception as error:
            message = f'experiment configuration is not readable: {error}'
            raise ConfigurationError(message)
        if experiment is not None:
            present = configuration.get('experiment')
            if (present is not None
                    and str(present).upper() != experiment.upper()):
                message = f'experiment {experiment} does not match {present}'
                raise ConfigurationError(message)
            configuration['experiment'] = experiment
        experiment = configuration.get('experiment')
        if experiment is None:
            raise ConfigurationError('no experiment id found')
        experiment = str(experiment).upper()
        if experiment not in EXPERIMENTS:
            raise ConfigurationError(f'unknown experiment id {experiment}')
        configuration['experiment'] = experiment
        seed = configuration.get('seed')
        if seed is None:
            raise ConfigurationError('no seed found')
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigurationError(f'seed must be nonnegative int, '
                                     f'not {seed!r}')
        return configuration


reader = Reader()
