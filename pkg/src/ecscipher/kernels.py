"""Kernel selection: compiled extension when built, pure fallback otherwise.

Set ECS_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
parity tests).  Both implementations are bit-identical by contract.
"""

import os

if os.environ.get("ECS_PURE_PYTHON"):
    from . import _kernels_py as _impl

    IMPLEMENTATION = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        IMPLEMENTATION = "python"

gf_mul = _impl.gf_mul
pad_table = _impl.pad_table
max_mask_imbalance = _impl.max_mask_imbalance
