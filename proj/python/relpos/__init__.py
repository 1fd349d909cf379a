"""Decompositions of systems of subspaces of C^n."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ConditioningFailure,
    DimensionMismatch,
    Error,
    InvalidArgument,
    PreconditionFailure,
)

BLOCK_NAMES = ("S", "N1", "N2", "N3", "M1", "M2", "M3", "K", "L")
