"""Numerics for quantum tori, theta vectors, and quantum theta functions."""

try:
    from ._qtheta import *  # noqa: F401,F403  (installed package layout)
    from ._qtheta import __version__  # noqa: F401
except ImportError:  # development layout: extension built out of tree
    from _qtheta import *  # noqa: F401,F403
    from _qtheta import __version__  # noqa: F401
