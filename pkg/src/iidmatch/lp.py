"""Thin LP layer: maximize c.x subject to sparse rows a.x <= b and box bounds.

Solved with HiGHS through :func:`scipy.optimize.linprog`.  The pairwise
per-offline-node constraint family makes these LPs large (rows grow with the
squared right-degrees), so callers building them go through
:func:`guard_row_count` first; refusing oversized models is a feature, not a
limitation, because solve cost is dominated by the constraint count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

FEAS_TOL = 1e-9
MAX_LP_ROWS = 2_000_000
# interior point (with crossover) beats simplex well before this row count
IPM_ROW_THRESHOLD = 50_000


class LpSizeError(Exception):
    """Raised when a model exceeds MAX_LP_ROWS constraint rows."""

    def __init__(self, rows: int):
        self.rows = rows
        super().__init__(
            f"LP has {rows} constraint rows, exceeding the {MAX_LP_ROWS} guard")


def guard_row_count(rows: int) -> None:
    if rows > MAX_LP_ROWS:
        raise LpSizeError(rows)


@dataclass
class LinearProgram:
    """maximize objective . x  s.t.  rows and per-variable [lo, hi] bounds."""

    var_count: int
    objective: np.ndarray
    rows: list[tuple[np.ndarray, np.ndarray, float]]  # (indices, coefs, ub)
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound above upper bound")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounds must be finite")
        for idx, _, _ in self.rows:
            if len(idx) and (idx.min() < 0 or idx.max() >= self.var_count):
                raise ValueError("row coefficient index out of range")


@dataclass
class LPSolution:
    values: np.ndarray
    objective: float
    status: str  # optimal | infeasible | unbounded


def solve_lp_max(lp: LinearProgram) -> LPSolution:
    n = lp.var_count
    if lp.rows:
        indptr = np.zeros(len(lp.rows) + 1, dtype=np.int64)
        np.cumsum([len(idx) for idx, _, _ in lp.rows], out=indptr[1:])
        indices = np.concatenate([idx for idx, _, _ in lp.rows]) if indptr[-1] \
            else np.empty(0, dtype=np.int64)
        data = np.concatenate([c for _, c, _ in lp.rows]) if indptr[-1] \
            else np.empty(0)
        a_ub = csr_matrix((data, indices, indptr), shape=(len(lp.rows), n))
        b_ub = np.array([ub for _, _, ub in lp.rows])
    else:
        a_ub = None
        b_ub = None
    method = "highs-ipm" if len(lp.rows) >= IPM_ROW_THRESHOLD else "highs"
    res = linprog(-lp.objective, A_ub=a_ub, b_ub=b_ub,
                  bounds=np.column_stack([lp.lower, lp.upper]),
                  method=method)
    if res.status == 0:
        return LPSolution(np.asarray(res.x), float(-res.fun), "optimal")
    if res.status == 2:
        return LPSolution(np.empty(0), float("nan"), "infeasible")
    if res.status == 3:
        return LPSolution(np.empty(0), float("nan"), "unbounded")
    raise RuntimeError(f"LP solver failed: {res.message}")


def feasibility_violation(lp: LinearProgram, x: np.ndarray,
                          tol: float = FEAS_TOL) -> float:
    """Largest constraint/bound violation of ``x`` minus ``tol`` floor at 0."""
    worst = 0.0
    worst = max(worst, float(np.max(lp.lower - x, initial=0.0)))
    worst = max(worst, float(np.max(x - lp.upper, initial=0.0)))
    for idx, coefs, ub in lp.rows:
        worst = max(worst, float(x[idx] @ coefs - ub))
    return worst
