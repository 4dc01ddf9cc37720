"""Photon statistics of a cavity filled with a Rydberg-EIT ensemble."""

from ._core import *  # noqa: F401,F403
from ._core import RydcavError, config, load_config, run_point  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
