"""Stretched polymers in random potentials: exact enumeration, transfer
operators and Ornstein-Zernike renewal analysis on top of the C++ core."""

try:
    from ._polylab import *  # noqa: F401,F403  (installed layout)
    from ._polylab import __version__  # noqa: F401
except ImportError:  # build-tree layout: module next to the package on sys.path
    from _polylab import *  # noqa: F401,F403
    from _polylab import __version__  # noqa: F401
