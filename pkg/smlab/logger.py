"""Contains the laboratory logger shared by all numerical components."""

import pepperoni

from .config import config


record_format = '{isodate}\t{thread}\t{rectype}\t{message}\n'

logger = pepperoni.logger(file=True)
logger.configure(format=record_format)


def setup_logger(debug=None, **parameters):
    """Apply user logging parameters on top of the file configuration.

    Parameters
    ----------
    debug : bool, optional
        Switch DEBUG records on or off, e.g. from the command line.
    **parameters
        Any other option understood by ``pepperoni`` loggers.
    """
    options = dict(config['LOGGING']) if config.check('LOGGING') else {}
    options.update(parameters)
    if debug is not None:
        options['debug'] = debug
    if options:
        logger.configure(**options)
    return logger


setup_logger()
