"""Shared log-factorial table.

Both kernel backends read this one growable array so their binomial tails are
bit-identical (C libm and CPython disagree on lgamma in the last ulp).
"""

import numpy as np

_table = np.zeros(1, dtype=np.float64)


def log_factorial_table(n):
    """Return an array t with t[k] = log(k!) valid for k <= n."""
    global _table
    if _table.shape[0] <= n:
        m = max(2 * _table.shape[0], n + 1)
        ks = np.arange(_table.shape[0], m, dtype=np.float64)
        _table = np.concatenate([_table, np.cumsum(np.log(ks)) + _table[-1]])
    return _table
