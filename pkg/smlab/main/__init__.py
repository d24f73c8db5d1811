"""Contains main laboratory components and interfaces."""

from .experiment import Experiment, Report
from .console import main


__all__ = [Experiment, Report, main]
