"""Threshold-circuit compiler and verifier for saturated-attention heads."""

try:
    from ._ahac import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # in-tree: extension sits on sys.path from the build dir
    from _ahac import *  # noqa: F401,F403
