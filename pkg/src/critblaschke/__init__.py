"""Finite Blaschke products with prescribed distinct critical points.

>>> from critblaschke import solve
>>> res = solve([0.5])
>>> float(round(res.a[0].real, 12))
-0.8
"""

from .blaschke import BlaschkeProduct
from .instances import gen_circle, gen_cluster, gen_disk
from .solver import SolveOptions, SolveResult, solve
from .verify import bottleneck_assign, computed_critical_points, report

__all__ = [
    "BlaschkeProduct",
    "SolveOptions",
    "SolveResult",
    "bottleneck_assign",
    "computed_critical_points",
    "gen_circle",
    "gen_cluster",
    "gen_disk",
    "report",
    "solve",
]
__version__ = "0.1.0"
