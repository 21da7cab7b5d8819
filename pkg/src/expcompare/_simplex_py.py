"""Pure-Python (numpy) simplex pivot kernel.

This is the fallback lane for the compiled kernel in ``_simplex_cy``.
Both implement exactly the same arithmetic in the same order, so a given
tableau is driven through the same pivot sequence and ends bit-for-bit
identical; keep any change mirrored in the ``.pyx`` twin.

The kernel mutates ``tab`` and ``basis`` in place and only performs the
pivot loop; building the tableau and interpreting the result is the
driver's job (see ``lp.py``).
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "pure-python"

#: Return codes of :func:`run_simplex`.
OPTIMAL, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2


def run_simplex(
    tab: np.ndarray,
    basis: np.ndarray,
    n_eligible: int,
    tol: float,
    max_iter: int,
) -> int:
    """Pivot ``tab`` to optimality with Bland's anti-cycling rule.

    ``tab`` is an ``(m+1) x (n+1)`` dense tableau: ``m`` constraint rows,
    one reduced-cost row at the bottom, and the right-hand side in the
    last column.  ``basis`` holds the basic variable of each constraint
    row.  Only columns ``< n_eligible`` may enter the basis (this is how
    phase two excludes artificial columns).
    """
    m = tab.shape[0] - 1
    n = tab.shape[1] - 1
    rhs = tab[:m, n]
    for _ in range(max_iter):
        # Bland entering rule: lowest-index eligible column with a
        # negative reduced cost.
        neg = np.flatnonzero(tab[m, :n_eligible] < -tol)
        if neg.size == 0:
            return OPTIMAL
        c = int(neg[0])

        col = tab[:m, c]
        positive = col > tol
        if not positive.any():
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[positive] = rhs[positive] / col[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios == best)
        # Bland leaving rule: among minimal ratios, the row whose basic
        # variable has the smallest index.
        r = int(ties[np.argmin(basis[ties])])

        tab[r, :] /= tab[r, c]
        factors = tab[:, c].copy()
        factors[r] = 0.0
        tab -= np.outer(factors, tab[r, :])
        basis[r] = c
    return ITERATION_LIMIT
