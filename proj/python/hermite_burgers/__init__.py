"""Hermite-sheet noise sampling, stochastic integration and the mild-form
Burgers solver, backed by the C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
