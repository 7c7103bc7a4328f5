"""Entry point for ``python -m ringlight``."""

import sys

from ringlight.cli.main import main

sys.exit(main())
