"""Numerical kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
numpy fallback is used. Both expose the same functions and agree on results
up to floating-point roundoff.
"""

from . import fallback

try:
    from . import native as _native_mod

    _impl = _native_mod
except ImportError:
    _impl = fallback

BACKEND = _impl.BACKEND
eval_slot = _impl.eval_slot
newton_dependence = _impl.newton_dependence
newton_tangency = _impl.newton_tangency
newton_common_zero = _impl.newton_common_zero
oracle_residual = _impl.oracle_residual

dependence_system = fallback.dependence_system
tangency_system = fallback.tangency_system
common_zero_system = fallback.common_zero_system

__all__ = [
    "BACKEND",
    "eval_slot",
    "newton_dependence",
    "newton_tangency",
    "newton_common_zero",
    "oracle_residual",
    "dependence_system",
    "tangency_system",
    "common_zero_system",
    "fallback",
]
