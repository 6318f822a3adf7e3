"""Entry point for python -m threshcov."""

import sys

from threshcov.cli import main

if __name__ == "__main__":
    sys.exit(main())
