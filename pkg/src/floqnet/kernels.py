"""Sampling kernel selection: compiled extension when available, pure
numpy otherwise.  Set FLOQNET_PURE=1 to force the fallback."""

from __future__ import annotations

import os


def _load():
    if not os.environ.get("FLOQNET_PURE"):
        try:
            from floqnet import _sampler_c

            return _sampler_c, "compiled"
        except ImportError:
            pass
    from floqnet import _sampler_py

    return _sampler_py, "python"


_KERNEL, KERNEL_NAME = _load()


def get(name: str | None = None):
    """Kernel module by name: None for the active one, else compiled|python."""
    if name is None:
        return _KERNEL
    if name == "compiled":
        from floqnet import _sampler_c

        return _sampler_c
    if name == "python":
        from floqnet import _sampler_py

        return _sampler_py
    raise ValueError(f"unknown kernel {name!r}")


def run_batch(*args, **kwargs):
    return _KERNEL.run_batch(*args, **kwargs)
