"""COPE matrices, their factorizations and contextuality certificates."""

from ._copekit import *  # noqa: F401,F403
from ._copekit import GuardExceeded, ParseError

EXIT_CODES = {"Noncontextual": 0, "Contextual": 10, "Undetermined": 20}

__all__ = [name for name in dir() if not name.startswith("_")]
