"""Commuting contractive operator tuples: characteristic functions,
dilations, functional models and invariant-subspace correspondence."""

try:
    from ._cct import *  # noqa: F401,F403
    from . import _cct as _impl
except ImportError:  # development layout: _cct built next to the package
    from _cct import *  # noqa: F401,F403
    import _cct as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
