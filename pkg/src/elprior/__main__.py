"""Run the command-line interface with ``python -m elprior``."""

import sys

from .cli import main

sys.exit(main())
