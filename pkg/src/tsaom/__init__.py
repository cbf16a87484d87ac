"""Affine OneMax and transvection-sequence test functions over GF(2)."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("tsaom")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.1.0"

__all__ = ["__version__"]
