"""Command-line entry point: `python . <subcommand> ...` from the repository root."""

import sys

from harness_cli import main

if __name__ == "__main__":
    sys.exit(main())
