"""Partial matching of names given on the command line or in spec files.

Algorithm kinds, transvection classes, solver names and KM presets can be
abbreviated to any unique prefix, the way R's ``match.arg`` and ``pmatch``
resolve arguments.
"""

from __future__ import annotations

from collections.abc import Iterable
from enum import Enum
from functools import singledispatch
from typing import Literal, TypeVar, overload

from pydantic import validate_call

E = TypeVar("E", bound=Enum)


@validate_call
def pmatch(x: str, table: Iterable[str]) -> int | None:
    """Index of ``x`` in ``table`` by exact or unique-prefix match.

    The empty string matches nothing.

    Args:
        x: String to match.
        table: Strings to match against.

    Returns:
        The 0-based index of the match, -1 if several entries start with
        ``x`` and none equals it, None if nothing matches.
    """
    if not x:
        return None

    table_list = list(table)
    if x in table_list:
        return table_list.index(x)

    matches = [index for index, choice in enumerate(table_list) if choice.startswith(x)]
    if not matches:
        return None
    if len(matches) == 1:
        return matches[0]
    return -1


@overload
def match_arg(
    arg: str | Iterable[str], choices: list[str], *, several_ok: Literal[False] = False
) -> str: ...
@overload
def match_arg(
    arg: str | Iterable[str], choices: list[str], *, several_ok: Literal[True]
) -> list[str]: ...
@validate_call
def match_arg(
    arg: str | Iterable[str], choices: list[str], *, several_ok: bool = False
) -> str | list[str]:
    """Resolve ``arg`` against ``choices`` with partial matching.

    Args:
        arg: A name, or several names when ``several_ok`` is True.
        choices: The valid names. Duplicates are dropped.
        several_ok: Accept an iterable of names and ambiguous prefixes, and
            always return a list.

    Returns:
        The matched choice, or the list of matched choices.

    Raises:
        ValueError: If a name matches nothing, is ambiguous while
            ``several_ok`` is False, or an iterable is given without
            ``several_ok``.

    Examples:
        >>> match_arg("rl", ["rs", "rls", "hc"])
        'rls'
        >>> match_arg(["ga", "u"], ["ga", "umda", "pbil"], several_ok=True)
        ['ga', 'umda']
    """
    return _match_arg(arg, list(dict.fromkeys(choices)), several_ok=several_ok)


@singledispatch
def _match_arg(
    arg: str | Iterable[str], choices: list[str], *, several_ok: bool = False
) -> str | list[str]: ...


@_match_arg.register(str)
def _(arg: str, choices: list[str], *, several_ok: bool = False) -> str | list[str]:
    index = pmatch(arg, choices)

    if index is None:
        msg = (
            f"The provided argument '{arg}' is not valid. "
            f"Available choices are: {', '.join(choices)}."
        )
        raise ValueError(msg)

    if index == -1:
        candidates = [choice for choice in choices if choice.startswith(arg)]
        if several_ok:
            return candidates
        msg = (
            f"The argument '{arg}' matches multiple choices: "
            f"{', '.join(candidates)}. Be more specific."
        )
        raise ValueError(msg)

    return [choices[index]] if several_ok else choices[index]


@_match_arg.register(Iterable)
def _(arg: Iterable[str], choices: list[str], *, several_ok: bool = False) -> str | list[str]:
    if not several_ok:
        msg = "Iterable input is only allowed when several_ok=True."
        raise ValueError(msg)

    matched: list[str] = []
    for position, name in enumerate(list(arg)):
        try:
            matched.extend(_match_arg(name, choices, several_ok=True))
        except ValueError as err:
            msg = f"Error in element {position} ('{name}'): {err}"
            raise ValueError(msg) from err
    return matched


def match_enum(arg: str | E, enum_cls: type[E]) -> E:
    """Resolve a name to a member of a string-valued enum.

    Members can be given by value or by a unique prefix of the value;
    members pass through unchanged.

    Raises:
        ValueError: If ``arg`` matches no member or several.

    Examples:
        >>> from tsaom.transvections import TransvectionClass
        >>> match_enum("disj", TransvectionClass)
        <TransvectionClass.DISJOINT: 'disjoint'>
    """
    if isinstance(arg, enum_cls):
        return arg
    values = [str(member.value) for member in enum_cls]
    return enum_cls(match_arg(str(arg), values))
