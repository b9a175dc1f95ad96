"""
Application entry point.
Lean orchestration - configuration and dispatch only.
"""

import sys

from src.cli import run
from src.core.config import Config


def main() -> int:
    """
    Command-line entry point.
    Returns exit code.
    """
    # Environment first, command-line flags override inside run()
    config = Config.from_environment()
    return run(sys.argv[1:], config)


if __name__ == "__main__":
    sys.exit(main())
