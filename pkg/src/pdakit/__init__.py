"""Placement delivery arrays for coded caching: build, check, bound, simulate, compare."""

__version__ = "0.1.0"

from .pda import *  # noqa: F401,F403
from .constructions import *  # noqa: F401,F403
from .bounds import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .pareto import *  # noqa: F401,F403
from .caching import *  # noqa: F401,F403
from .comparisons import *  # noqa: F401,F403
from . import bounds, caching, comparisons, constructions, oracle, pareto, pda

__all__ = (
    pda.__all__
    + constructions.__all__
    + bounds.__all__
    + oracle.__all__
    + pareto.__all__
    + caching.__all__
    + comparisons.__all__
)
