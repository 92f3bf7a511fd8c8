"""Weakly asymmetric zero-range process laboratory.

Thin Python layer over the C++ core: kinetic Monte Carlo for the zero-range
process on the torus, invariant-measure numerics, height/field observables,
Brownian-envelope sampling, basic coupling, and spectral/grid SPDE solvers.
"""

try:
    from ._zrplab import *  # noqa: F401,F403  (installed layout)
    from ._zrplab import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: _zrplab.so next to the package on sys.path
    from _zrplab import *  # noqa: F401,F403
