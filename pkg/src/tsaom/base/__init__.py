"""Partial matching of user-supplied names against closed sets of choices."""

from tsaom.base.matching import match_arg, match_enum, pmatch

__all__ = ["match_arg", "match_enum", "pmatch"]
