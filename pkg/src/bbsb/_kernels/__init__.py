"""Numerical kernels with a compiled core and a NumPy fallback.

The compiled extension (``_core``) is preferred when available; otherwise the
pure-NumPy reference (``_ref``) is used. Both expose the same functions and
are pure (no RNG), so the choice never alters a sampling trajectory beyond
floating-point rounding.
"""

from __future__ import annotations

from . import _ref

try:
    from . import _core  # type: ignore[attr-defined]

    _impl = _core
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    _impl = _ref
    BACKEND = "python"

AVAILABLE_BACKENDS = ("python",) if _impl is _ref else ("python", "cython")


def set_backend(name: str) -> None:
    """Switch the active kernel backend ('python' or 'cython')."""
    global _impl, BACKEND
    if name == "python":
        _impl = _ref
    elif name == "cython":
        if "cython" not in AVAILABLE_BACKENDS:
            raise ValueError("compiled kernel backend is not available")
        _impl = _core
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


def get_backend(name: str):
    """Return the raw kernel module for a backend name."""
    if name == "python":
        return _ref
    if name == "cython" and "cython" in AVAILABLE_BACKENDS:
        return _core
    raise ValueError(f"backend {name!r} is not available")


def v_transition_logpdf(v_next, v_prev, kappa, alpha, theta):
    return _impl.v_transition_logpdf(v_next, v_prev, kappa, alpha, theta)


def chain_loglik(v, kappa, alpha, theta):
    return _impl.chain_loglik(v, kappa, alpha, theta)


def kappa_support_logliks(v, support, alpha, theta):
    return _impl.kappa_support_logliks(v, support, alpha, theta)


def step2_logweights(v_prev, kappa, alpha, theta, a_count, t_count):
    return _impl.step2_logweights(v_prev, kappa, alpha, theta, a_count, t_count)


def pair_logweights(v_prev, v_next, kappa, alpha, theta):
    return _impl.pair_logweights(v_prev, v_next, kappa, alpha, theta)
