"""Command-line entry point; see ``streamed_planarity.cli``."""

from __future__ import annotations

import sys

from streamed_planarity.cli import main


if __name__ == "__main__":
    sys.exit(main())
