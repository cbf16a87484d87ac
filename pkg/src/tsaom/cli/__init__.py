"""Command-line interface of tsaom."""

from tsaom.cli.main import main

__all__ = ["main"]
