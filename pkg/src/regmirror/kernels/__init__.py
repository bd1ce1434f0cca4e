"""Mirror-step kernel backend selection.

The compiled Cython kernels are preferred when the extension built;
otherwise the numpy fallback is used. Set REGMIRROR_KERNELS=python (or
=cython) to force a backend, e.g. for the backend-parity tests and the
``regmirror bench`` comparison.
"""

import os

from . import _pykernels


def load_backend(name):
    """Return the kernel module for 'python' or 'cython'.

    Raises ImportError for 'cython' when the extension is unavailable.
    """
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _cykernels
        return _cykernels
    raise ValueError(f"unknown kernel backend {name!r}")


_forced = os.environ.get("REGMIRROR_KERNELS")
if _forced:
    _impl = load_backend(_forced)
    BACKEND = _forced
else:
    try:
        from . import _cykernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

l2_step = _impl.l2_step
qnorm_step = _impl.qnorm_step
entropy_step = _impl.entropy_step
