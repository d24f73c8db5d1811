"""Spectral multiplier laboratory."""

from .main.calculus import apply, refine
from .main.experiment import Experiment, Report
from .main.operators import OperatorModel, OperatorFamily
from .main.operators import diagonal_model, jordan_model, circulant_laplacian
from .main.rbound import rbound_lower, semi_rbound_lower
from .main.spaces import GridFunction, MultiplierFunction
from .main.spaces import hoermander_norm, make_partition, standard_family


__author__ = 'Timur Faradzhov'
__copyright__ = 'Copyright 2024, The Smlab project'
__credits__ = ['Timur Faradzhov', 'Kostadin Taneski']

__license__ = 'MIT'
__version__ = '0.1.0'
__maintainer__ = 'Timur Faradzhov'
__email__ = 'timurfaradzhov@gmail.com'
__status__ = 'Development'

__all__ = [Experiment, Report, OperatorModel, OperatorFamily, GridFunction,
           MultiplierFunction, apply, refine, diagonal_model, jordan_model,
           circulant_laplacian, rbound_lower, semi_rbound_lower,
           hoermander_norm, make_partition, standard_family]
