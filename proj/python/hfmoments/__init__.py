"""Realized moments from tick data, variance forecasting regressions and a jump-diffusion simulator."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
