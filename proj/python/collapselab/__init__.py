"""Iterative-training risk laboratory.

Thin Python surface over the C++ core: exact risk recurrences, Monte Carlo
engines for categorical/Gaussian/GMM/logistic families, schedule planning
and trajectory aggregation.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc or __doc__
