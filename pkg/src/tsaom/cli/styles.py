"""ANSI styling for messages written to the terminal."""

from __future__ import annotations

import os
import sys
from typing import Literal, TextIO

_RESET = "\033[0m"
_BOLD = "\033[1m"

ColorName = Literal["red", "green", "yellow", "blue"]

_COLORS: dict[str, str] = {
    "red": "\033[31m",
    "green": "\033[32m",
    "yellow": "\033[33m",
    "blue": "\033[34m",
}


def supports_color(stream: TextIO | None = None) -> bool:
    """Whether ANSI codes should be written to ``stream`` (stderr by default).

    ``NO_COLOR`` turns colors off and ``FORCE_COLOR`` turns them on;
    otherwise the stream must be a terminal other than ``TERM=dumb``.
    """
    if os.getenv("NO_COLOR"):
        return False
    if os.getenv("FORCE_COLOR"):
        return True
    stream = sys.stderr if stream is None else stream
    if stream is None or not hasattr(stream, "isatty") or not stream.isatty():
        return False
    return os.getenv("TERM", "").lower() != "dumb"


def _apply_style(text: str, code: str) -> str:
    if not supports_color():
        return text
    return f"{code}{text}{_RESET}"


def bold(text: str) -> str:
    """Make text bold."""
    return _apply_style(text, _BOLD)


def color(text: str, color_name: ColorName) -> str:
    """Apply a foreground color to text.

    Raises:
        ValueError: If the color is unknown.
    """
    if color_name not in _COLORS:
        msg = f"Unknown color: {color_name}"
        raise ValueError(msg)
    return _apply_style(text, _COLORS[color_name])


def red(text: str) -> str:
    """Make text red."""
    return color(text, "red")


def green(text: str) -> str:
    """Make text green."""
    return color(text, "green")


def yellow(text: str) -> str:
    """Make text yellow."""
    return color(text, "yellow")


def blue(text: str) -> str:
    """Make text blue."""
    return color(text, "blue")
