"""Efficiency-aware switch migration for multi-controller SDN."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
