"""Permutations of Z/nZ (and small abelian groups) destroying every AP."""

try:
    from ._apdperm import *  # noqa: F401,F403
    from ._apdperm import __version__  # noqa: F401
except ImportError:  # extension built out-of-package (plain CMake build)
    from _apdperm import *  # noqa: F401,F403
    from _apdperm import __version__  # noqa: F401
