"""Status symbols with ASCII fallbacks."""

from __future__ import annotations

import os
import sys
from typing import Literal

SymbolName = Literal["tick", "cross", "warning", "info", "bullet", "line"]

_SYMBOLS: dict[str, tuple[str, str]] = {
    "tick": ("✔", "v"),
    "cross": ("✖", "x"),
    "warning": ("⚠", "!"),
    "info": ("ℹ", "i"),
    "bullet": ("•", "*"),
    "line": ("─", "-"),
}


def supports_unicode() -> bool:
    """Whether stderr can print the Unicode symbols; ``ASCII_ONLY`` forces ASCII."""
    if os.getenv("ASCII_ONLY"):
        return False
    encoding = getattr(sys.stderr, "encoding", None)
    return encoding is not None and encoding.lower().replace("-", "") == "utf8"


def symbol(name: SymbolName) -> str:
    """The Unicode symbol, or its ASCII alternative when Unicode is unsupported.

    Raises:
        ValueError: If the symbol name is not recognized.
    """
    if name not in _SYMBOLS:
        msg = f"Unknown symbol: {name}"
        raise ValueError(msg)
    unicode, ascii_ = _SYMBOLS[name]
    return unicode if supports_unicode() else ascii_
