"""Contraction certificates for reaction networks via logarithmic norms.

The heavy lifting lives in the compiled extension ``_mucert``; this package
re-exports its public surface.
"""

from ._mucert import *  # noqa: F401,F403
from ._mucert import __version__  # noqa: F401
