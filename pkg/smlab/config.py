"""Contains application configurator.

Used to transfer numerical parameters from user to application.
"""

import os
import re
import configparser

import psutil


path = os.path.abspath(os.path.expanduser('~/.smlab/smlab.ini'))
encoding = 'utf-8'

defaults = {
    'GRID': {
        'spacing': 2**-7,
        'lower': -16.0,
        'upper': 16.0,
        'tol_part': 1e-10,
        'tol_tail': 1e-8,
        'tol_dil': 1e-6,
        'padding': 8.0,
        'fd_step': 2**-10,
        'fd_width': 6
    },
    'SEARCH': {
        'tuples': [1, 2, 4, 8],
        'restarts': 4,
        'iterations': 40,
        'samples': 100000,
        'exhaustive_limit': 20,
        'max_tuple': 64,
        'seed': 0
    },
    'CALCULUS': {
        'contour_step': 0.05,
        'contour_span': 40.0,
        'wave_points': 2**16,
        'br_points': 2**12,
        'fourier_padding': 16,
        'mellin_spacing': 2**-9,
        'tolerance': 1e-8
    },
    'HARNESS': {
        'threads': None
    },
    'LOGGING': {}
}


class Configurator(dict):
    """Represents main configurator."""

    def __init__(self):
        super().__init__()
        for name, options in defaults.items():
            self[name] = Configuration(name)
            self[name].update_all(options)
        if self.found:
            self.load()

    def load(self):
        """Load configuration from file into memory."""
        parser = configparser.ConfigParser(allow_no_value=True)
        parser.read(path, encoding=encoding)
        for section in parser.sections():
            name = section.upper()
            if name not in self:
                self[name] = Configuration(name)
            for option in parser.options(section):
                initial_value = parser[section][option]
                final_value = self.normalize(initial_value)
                self[name][option] = final_value
        return self

    def parse(self, text, name='EXPERIMENT'):
        """Parse flat key-value text into a new configuration."""
        parser = configparser.ConfigParser(allow_no_value=True,
                                           inline_comment_prefixes=('#',))
        parser.read_string(f'[{name}]\n{text}')
        configuration = Configuration(name)
        for option in parser.options(name):
            value = parser[name][option]
            configuration[option] = self.normalize(value)
        return configuration

    def normalize(self, value):
        """Normalize given parameter value."""
        if value is None or value.isspace() or value == '':
            return None
        value = value.strip().strip('"').strip("'")
        if value.startswith('[') and value.endswith(']'):
            value = value[1:-1]
        if ',' in value:
            items = [item.strip() for item in value.split(',')]
            return [self.normalize(item) for item in items if item]
        if value.upper() == 'NONE':
            return None
        elif value.upper() == 'TRUE':
            return True
        elif value.upper() == 'FALSE':
            return False
        elif re.match(r'^[+-]?\d+$', value):
            return int(value)
        elif re.match(r'^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$', value):
            return float(value)
        elif re.match(r'^2\^[+-]?\d+$', value):
            return 2.0**int(value[2:])
        return value

    def check(self, configuration_name):
        """Determine whether configuration presented and filled or not."""
        if self.get(configuration_name):
            return True
        return False

    @property
    def found(self):
        """Determine whether configuration file found or not."""
        if os.path.exists(path):
            return True
        return False

    @property
    def threads(self):
        """Get the number of worker threads allowed for parallel work."""
        value = os.environ.get('SMLAB_THREADS')
        if value is not None and value.strip().isdigit():
            return max(int(value), 1)
        value = self['HARNESS'].get('threads')
        if isinstance(value, int) and value > 0:
            return value
        return psutil.cpu_count(logical=False) or 1


class Configuration(dict):
    """Represents some configuration."""

    def __init__(self, name):
        super().__init__()
        self.name = name

    def __setitem__(self, key, value):
        """Set the parameter value."""
        super().__setitem__(key.lower(), value)

    def __getitem__(self, key):
        """Get the parameter value or raise an exception if not found."""
        return super().__getitem__(key.lower())

    def __contains__(self, key):
        return super().__contains__(key.lower())

    def get(self, key, default=None):
        """Get the parameter value or return default if not found."""
        return super().get(key.lower(), default)

    def update_all(self, options):
        """Set all parameters from the given mapping."""
        for key, value in options.items():
            self[key] = value


config = Configurator()
