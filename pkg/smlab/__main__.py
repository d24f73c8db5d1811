"""Run the laboratory command line as ``python -m smlab``."""

import sys

from .main.console import main


sys.exit(main())
