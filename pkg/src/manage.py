#!/usr/bin/env python
"""rjd-nest command-line utility, usable without installing the package."""

import sys


def main():
    """Run a subcommand, e.g. `python src/manage.py run --problem gauss-4`."""
    try:
        from apps.cli.commands import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import the rjd-nest apps. Are numpy, scipy and "
            "python-decouple installed and is src/ on your PYTHONPATH? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    sys.exit(execute_from_command_line(sys.argv[1:]))


if __name__ == "__main__":
    main()
