"""Pseudospectral toolkit for the Choquard equation with an inverse-square
potential: sharp constants, dichotomy thresholds, regularized time
integration and virial diagnostics."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
