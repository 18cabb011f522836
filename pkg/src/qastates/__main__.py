"""Module entry point: ``python -m qastates``."""

import sys

from .cli import main

sys.exit(main())
