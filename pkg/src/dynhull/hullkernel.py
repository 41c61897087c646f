"""Hull kernel namespace: re-exports of :mod:`dynhull.hull`."""

from .errors import CacheMiss, DegenerateInput, DegenerateQuery, TooFewPoints
from .hull import *  # noqa: F401,F403
from .hull import __all__ as _hull_all
from .pointset import PointSet, read_pointset, write_pointset

__all__ = list(_hull_all) + ["CacheMiss", "DegenerateInput", "DegenerateQuery", "TooFewPoints",
                             "PointSet", "read_pointset", "write_pointset"]
