"""Backend selection: compiled kernels when built, pure Python otherwise.

Set ``AMPEST_PURE_PYTHON=1`` to force the fallback.  Both backends produce
bit-identical results; see ``benchmarks/compare_backends.py``.
"""

import os

if os.environ.get("AMPEST_PURE_PYTHON", "") == "1":
    from . import _pykernels as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND

cheb_t = kernels.cheb_t
binom_upper_tail = kernels.binom_upper_tail
binom_lower_tail = kernels.binom_lower_tail
cp_interval = kernels.cp_interval
cp_max_halfwidth = kernels.cp_max_halfwidth
find_next_cheb = kernels.find_next_cheb
invert_cheb = kernels.invert_cheb
toss_batch = kernels.toss_batch
chebae_core = kernels.chebae_core
clenshaw_scalar = kernels.clenshaw_scalar

# numpy's vectorized recurrence beats a scalar C loop on large grids and is
# bit-identical to it (same per-element operation order), so the grid
# evaluator always comes from the pure module
from ._pykernels import clenshaw_grid  # noqa: E402
