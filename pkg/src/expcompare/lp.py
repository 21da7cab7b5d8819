"""Dense linear programs and a self-contained two-phase simplex solver.

Programs are minimizations ``c @ x`` subject to ``a_eq @ x == b_eq``,
``a_ub @ x <= b_ub`` and ``x >= 0`` except where a variable is flagged
free.  The solver is a dense two-phase simplex with Bland's anti-cycling
rule (pivot tolerance ``PIVOT_TOL``, feasibility tolerance ``FEAS_TOL``),
so a given program always takes the same pivot path: re-solving an
identical program yields a bit-for-bit identical result.

The pivot loop is the hot kernel of the whole toolkit and exists in two
lanes: a compiled extension (``_simplex_cy``) and a pure numpy fallback
(``_simplex_py``).  The compiled lane is preferred at import time; set
the environment variable ``EXPCOMPARE_PURE=1`` (or call
:func:`use_kernel`) to force the fallback.  Both lanes perform identical
arithmetic; ``benchmarks/bench_lp.py`` compares their speed.

Dual values are extracted from the final basis.  Sign convention for the
minimization: duals of ``<=`` constraints are ``<= 0``, duals of equality
constraints are free, and the dual objective ``b_eq @ dual_eq +
b_ub @ dual_ub`` equals the primal value at optimality.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ShapeError, SolverError
from . import _simplex_py

try:  # compiled lane is optional; fall back to the numpy twin
    from . import _simplex_cy
except ImportError:  # pragma: no cover - depends on build environment
    _simplex_cy = None

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_KERNELS = {"pure-python": _simplex_py}
if _simplex_cy is not None:
    _KERNELS["compiled"] = _simplex_cy

if os.environ.get("EXPCOMPARE_PURE", "") not in ("", "0"):
    _kernel = _simplex_py
else:
    _kernel = _KERNELS.get("compiled", _simplex_py)


def use_kernel(name: str) -> None:
    """Select the pivot kernel ('compiled' or 'pure-python') at runtime.

    Intended for benchmarks and cross-lane tests; the default choice at
    import time is already the fastest available lane.
    """
    global _kernel
    try:
        _kernel = _KERNELS[name]
    except KeyError:
        raise ArgumentError(
            f"unknown kernel {name!r}; available: {sorted(_KERNELS)}"
        ) from None


def active_kernel() -> str:
    return _kernel.KERNEL_NAME


def available_kernels() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


def _block(a, rows_name: str, n: int, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Coerce an (A, b) constraint block, allowing both to be None."""
    a_mat, b_vec = a
    if a_mat is None and b_vec is None:
        return np.zeros((0, n)), np.zeros(0)
    a_arr = np.atleast_2d(np.array(a_mat, dtype=float, copy=True))
    b_arr = np.atleast_1d(np.array(b_vec, dtype=float, copy=True))
    if a_arr.shape[1] != n and a_arr.size > 0:
        raise ShapeError(f"{what} matrix has {a_arr.shape[1]} columns, expected {n}")
    if a_arr.shape[0] != b_arr.shape[0]:
        raise ShapeError(
            f"{what} has {a_arr.shape[0]} rows but {b_arr.shape[0]} right-hand sides"
        )
    return a_arr, b_arr


@dataclass(frozen=True)
class LinearProgram:
    """``min c @ x`` s.t. ``a_eq x = b_eq``, ``a_ub x <= b_ub``, ``x >= 0``.

    Variables listed in ``free`` (boolean mask) are unrestricted in sign;
    they are split into positive and negative parts internally.
    """

    c: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    free: np.ndarray | None = None

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.array(self.c, dtype=float, copy=True))
        n = c.shape[0]
        a_ub, b_ub = _block((self.a_ub, self.b_ub), "b_ub", n, "upper-bound block")
        a_eq, b_eq = _block((self.a_eq, self.b_eq), "b_eq", n, "equality block")
        if self.free is None:
            free = np.zeros(n, dtype=bool)
        else:
            free = np.atleast_1d(np.array(self.free, dtype=bool, copy=True))
            if free.shape != (n,):
                raise ShapeError("free mask length does not match objective")
        for name, arr in (
            ("objective", c),
            ("a_ub", a_ub),
            ("b_ub", b_ub),
            ("a_eq", a_eq),
            ("b_eq", b_eq),
        ):
            if not np.all(np.isfinite(arr)):
                raise ArgumentError(f"{name} contains NaN or infinite entries")
        for name, val in (
            ("c", c),
            ("a_ub", a_ub),
            ("b_ub", b_ub),
            ("a_eq", a_eq),
            ("b_eq", b_eq),
            ("free", free),
        ):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`solve`.

    ``value``, ``primal`` and the dual vectors are ``None`` unless the
    status is optimal.  ``dual_eq`` / ``dual_ub`` follow the constraint
    order of the program.
    """

    status: str
    value: float | None = None
    primal: np.ndarray | None = None
    dual_eq: np.ndarray | None = None
    dual_ub: np.ndarray | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _StandardForm:
    """Equality standard form with slacks, split free variables and
    artificial columns arranged after all structural columns."""

    def __init__(self, p: LinearProgram):
        n = p.n_vars
        free_idx = np.flatnonzero(p.free)
        # structural columns: originals, then one negated copy per free var
        a_all = np.vstack([p.a_eq, p.a_ub])
        ext = [a_all] if free_idx.size == 0 else [a_all, -a_all[:, free_idx]]
        a_ext = np.hstack(ext)
        self.c_ext = np.concatenate([p.c, -p.c[free_idx]])
        self.free_idx = free_idx
        self.n_orig = n
        self.n_ext = a_ext.shape[1]

        n_eq = p.a_eq.shape[0]
        n_ub = p.a_ub.shape[0]
        m = n_eq + n_ub
        b = np.concatenate([p.b_eq, p.b_ub])
        slack = np.vstack([np.zeros((n_eq, n_ub)), np.eye(n_ub)])
        rows = np.hstack([a_ext, slack])
        # normalize right-hand sides to be nonnegative, remembering signs
        sign = np.where(b < 0.0, -1.0, 1.0)
        rows *= sign[:, None]
        b = b * sign
        # artificial columns for equality rows and for negated <= rows
        needs_art = np.ones(m, dtype=bool)
        basis = np.empty(m, dtype=np.int64)
        n_struct = self.n_ext + n_ub
        art_of_row = {}
        k = 0
        for i in range(m):
            if i >= n_eq and sign[i] > 0:
                basis[i] = self.n_ext + (i - n_eq)  # slack starts basic
                needs_art[i] = False
            else:
                art_of_row[i] = n_struct + k
                basis[i] = n_struct + k
                k += 1
        art = np.zeros((m, k))
        for i, j in art_of_row.items():
            art[i, j - n_struct] = 1.0
        self.a_std = np.hstack([rows, art])
        self.b_std = b
        self.sign = sign
        self.n_eq = n_eq
        self.n_ub = n_ub
        self.m = m
        self.n_struct = n_struct
        self.n_total = n_struct + k
        self.basis0 = basis
        self.artificial_rows = needs_art


def _pivot(tab: np.ndarray, r: int, c: int) -> None:
    # Same arithmetic as the kernels' pivot step.
    tab[r, :] /= tab[r, c]
    factors = tab[:, c].copy()
    factors[r] = 0.0
    tab -= np.outer(factors, tab[r, :])


def _run_phase1(sf: _StandardForm) -> tuple[np.ndarray, np.ndarray, float]:
    m, n_total = sf.m, sf.n_total
    tab = np.zeros((m + 1, n_total + 1))
    tab[:m, :n_total] = sf.a_std
    tab[:m, n_total] = sf.b_std
    basis = sf.basis0.copy()
    # price out the artificial basis (phase-1 cost 1 per artificial)
    obj = np.zeros(n_total + 1)
    obj[sf.n_struct:n_total] = 1.0
    for i in np.flatnonzero(sf.artificial_rows):
        obj -= tab[i, :]
    tab[m, :] = obj
    code = _kernel.run_simplex(tab, basis, n_total, PIVOT_TOL, _max_iter(m, n_total))
    if code == _simplex_py.ITERATION_LIMIT:
        raise SolverError("phase one exceeded the pivot iteration limit")
    if code == _simplex_py.UNBOUNDED:
        raise SolverError("phase one reported an unbounded objective")
    return tab, basis, float(-tab[m, n_total])


def _max_iter(m: int, n: int) -> int:
    return 10_000 + 50 * (m + n)


def feasible(p: LinearProgram) -> bool:
    """Whether the program has any feasible point (phase one only)."""
    sf = _StandardForm(p)
    _, _, infeas = _run_phase1(sf)
    return infeas <= FEAS_TOL


def solve(p: LinearProgram) -> LPResult:
    """Solve the program; status is optimal, infeasible or unbounded."""
    sf = _StandardForm(p)
    m, n_total, n_struct = sf.m, sf.n_total, sf.n_struct
    tab, basis, infeas = _run_phase1(sf)
    if infeas > FEAS_TOL:
        return LPResult(status=INFEASIBLE)

    # Drive leftover artificials out of the basis where possible; rows with
    # no eligible pivot are redundant and keep a zero-level artificial.
    for i in range(m):
        if basis[i] >= n_struct:
            row = np.abs(tab[i, :n_struct])
            cands = np.flatnonzero(row > PIVOT_TOL)
            if cands.size:
                _pivot(tab, i, int(cands[0]))
                basis[i] = int(cands[0])

    # Phase two: restore the real objective, keep artificials ineligible.
    obj = np.zeros(n_total + 1)
    obj[: sf.n_ext] = sf.c_ext
    for i in range(m):
        cb = obj[basis[i]]
        if cb != 0.0:
            obj = obj - cb * tab[i, :]
    tab[m, :] = obj
    code = _kernel.run_simplex(tab, basis, n_struct, PIVOT_TOL, _max_iter(m, n_total))
    if code == _simplex_py.ITERATION_LIMIT:
        raise SolverError("phase two exceeded the pivot iteration limit")
    if code == _simplex_py.UNBOUNDED:
        return LPResult(status=UNBOUNDED)

    x_std = np.zeros(n_total)
    x_std[basis] = tab[:m, n_total]
    primal = x_std[: sf.n_orig].copy()
    if sf.free_idx.size:
        primal[sf.free_idx] -= x_std[sf.n_orig : sf.n_ext]
    value = float(p.c @ primal)

    cost_std = np.zeros(n_total)
    cost_std[: sf.n_ext] = sf.c_ext
    basis_cols = sf.a_std[:, basis]
    try:
        y = np.linalg.solve(basis_cols.T, cost_std[basis]) if m else np.zeros(0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - degenerate basis
        raise SolverError("singular basis while extracting duals") from exc
    y = y * sf.sign
    return LPResult(
        status=OPTIMAL,
        value=value,
        primal=primal,
        dual_eq=y[: sf.n_eq],
        dual_ub=y[sf.n_eq :],
    )
