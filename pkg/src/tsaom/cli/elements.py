"""Status messages for the command line.

Everything here writes to stderr, so that stdout only carries the data a
command produces (instances, spectra, reports, CSV).
"""

from __future__ import annotations

import sys
from typing import Any

from tsaom.cli.styles import blue, bold, green, red, yellow
from tsaom.cli.symbols import symbol


def _emit(*parts: str) -> None:
    print(*parts, file=sys.stderr)


def h2(text: str) -> None:
    """Print a heading.

    Examples:
        >>> h2("bench")  # doctest: +SKIP
        ── bench ──
    """
    rule = symbol("line") * 2
    _emit(f"\n{rule} {bold(text)} {rule}\n")


def alert_success(message: str) -> None:
    """Print a success message with a green tick."""
    _emit(bold(green(symbol("tick"))), message)


def alert_danger(message: str) -> None:
    """Print an error message with a red cross."""
    _emit(bold(red(symbol("cross"))), message)


def alert_warning(message: str) -> None:
    """Print a warning with a yellow sign."""
    _emit(bold(yellow(symbol("warning"))), message)


def alert_info(message: str) -> None:
    """Print an information message in blue."""
    _emit(bold(blue(symbol("info"))), message)


def bullets(items: list[Any] | dict[str, Any]) -> None:
    """Print items, or ``key: value`` pairs, as a bulleted list.

    Examples:
        >>> bullets({"rows": 15, "files": ["a.csv", "b.csv"]})  # doctest: +SKIP
          • rows: 15
          • files: a.csv, b.csv
    """
    if isinstance(items, dict):
        for key, value in items.items():
            shown = ", ".join(str(v) for v in value) if isinstance(value, list) else str(value)
            _emit(f"  {symbol('bullet')}", f"{key}: {shown}")
    else:
        for item in items:
            _emit(f"  {symbol('bullet')}", str(item))
