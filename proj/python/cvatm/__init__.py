"""Atmospheric CVQKD link simulator.

Python bindings over the C++ core: link scenarios, fading-channel
transmittance statistics, interruption probability, phase excess noise,
and asymptotic secret-key rates for homodyne/heterodyne detection.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
