"""Emitter coupled to an XY spin chain: dynamical maps and non-Markovianity measures."""

from ._core import *  # noqa: F401,F403
from ._core import CapabilityError, ConfigError  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
