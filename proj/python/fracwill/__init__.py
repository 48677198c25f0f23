from ._fracwill import *  # noqa: F401,F403
from ._fracwill import Error

__all__ = [name for name in dir() if not name.startswith("_")]
