"""Selects the kernel backend: compiled extension when available, else python.

The active backend can be forced with the ``PROBCORE_BACKEND`` environment
variable (``native`` or ``python``) or switched at runtime, which the test
suite and the backend benchmark use to compare the two implementations.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

_IMPLS = {"python": _kernels_py}
try:
    from . import _kernels as _kernels_native

    _IMPLS["native"] = _kernels_native
except ImportError:
    _kernels_native = None

_env = os.environ.get("PROBCORE_BACKEND", "auto").strip().lower() or "auto"
if _env not in ("auto", "native", "python"):
    raise RuntimeError(f"PROBCORE_BACKEND must be auto, native or python, got {_env!r}")
if _env == "native" and "native" not in _IMPLS:
    raise RuntimeError("PROBCORE_BACKEND=native but the compiled kernel is not installed")

_active = _IMPLS.get("native", _kernels_py) if _env == "auto" else _IMPLS[_env]


def impl():
    """The active kernel module."""
    return _active


def backend_name() -> str:
    return _active.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def set_backend(name: str):
    """Switch the active backend; mostly useful in tests and benchmarks."""
    global _active
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}, have {sorted(_IMPLS)}")
    _active = _IMPLS[name]


@contextmanager
def temporary_backend(name: str):
    prev = backend_name()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)
