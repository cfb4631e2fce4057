"""screenopt command-line entry point."""

from __future__ import annotations

import sys

from screenopt.api.cli import run
from screenopt.settings import Settings


def main(argv: list[str] | None = None) -> int:
    """Run the CLI with settings from the environment.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None.

    Returns:
        Process exit code.
    """
    return run(sys.argv[1:] if argv is None else argv, Settings())


if __name__ == "__main__":
    sys.exit(main())
