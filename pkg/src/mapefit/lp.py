"""Dense two-phase primal simplex with a vertex-enumeration test oracle.

Standard form throughout: minimize c.x subject to A x = b, x >= 0. Rows
with negative right-hand sides are sign-flipped before phase 1. Pricing is
Dantzig (most negative reduced cost) by default and switches permanently
to Bland's rule once the degenerate-pivot count passes twice (m + n),
which guarantees termination on the heavily degenerate programs produced
by absolute-deviation fits. Ratio-test ties go to the row whose basic
variable has the smallest index.

A single solve mutates only local state; concurrent solves on distinct
inputs are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SimplexConfig:
    """Solver tolerances, fixed by default and overridable per solve."""

    pivot_tol: float = 1e-10
    feas_tol: float = 1e-9
    opt_tol: float = 1e-9
    degenerate_switch_factor: int = 2
    max_pivots: int = 500_000


DEFAULT_CONFIG = SimplexConfig()

ORACLE_MAX_VARS = 20
ORACLE_MAX_ROWS = 10


@dataclass(frozen=True)
class StandardFormLP:
    """min objective.x subject to constraint_matrix @ x = rhs, x >= 0."""

    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        a = np.asarray(self.constraint_matrix, dtype=float)
        b = np.asarray(self.rhs, dtype=float).ravel()
        if a.ndim != 2:
            raise ValueError("constraint matrix must be 2-D")
        m, n = a.shape
        if c.shape[0] != n:
            raise ValueError(f"objective length {c.shape[0]} != column count {n}")
        if b.shape[0] != m:
            raise ValueError(f"rhs length {b.shape[0]} != row count {m}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP contains NaN or infinite entries")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", a)
        object.__setattr__(self, "rhs", b)

    @property
    def n_rows(self) -> int:
        return self.constraint_matrix.shape[0]

    @property
    def n_vars(self) -> int:
        return self.constraint_matrix.shape[1]


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0


class _PivotState:
    """Mutable pivot bookkeeping shared by the two phases."""

    def __init__(self, config: SimplexConfig, m: int, n: int):
        self.config = config
        self.pivots = 0
        self.degenerate = 0
        self.use_bland = False
        self.switch_at = config.degenerate_switch_factor * (m + n)

    def note_pivot(self, degenerate: bool) -> None:
        self.pivots += 1
        if degenerate:
            self.degenerate += 1
            if self.degenerate > self.switch_at:
                self.use_bland = True
        if self.pivots > self.config.max_pivots:
            raise RuntimeError("simplex pivot limit exceeded; numerical trouble suspected")


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    # pin the pivot column exactly to kill roundoff drift
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run(T: np.ndarray, basis: np.ndarray, eligible: np.ndarray, state: _PivotState) -> str:
    """Pivot until no negative reduced cost remains ("optimal") or an
    entering column has no blocking row ("unbounded").

    The last tableau row holds reduced costs with -objective in the corner.
    """
    cfg = state.config
    while True:
        red = T[-1, :-1]
        if state.use_bland:
            candidates = np.flatnonzero(eligible & (red < -cfg.opt_tol))
            if candidates.size == 0:
                return "optimal"
            col = int(candidates[0])
        else:
            masked = np.where(eligible, red, np.inf)
            col = int(np.argmin(masked))
            if masked[col] >= -cfg.opt_tol:
                return "optimal"

        colvals = T[:-1, col]
        rows = np.flatnonzero(colvals > cfg.pivot_tol)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / colvals[rows]
        best = float(ratios.min())
        tie_band = best + 1e-10 * (1.0 + abs(best))
        tied = rows[ratios <= tie_band]
        row = int(tied[np.argmin(basis[tied])])

        degenerate = T[row, -1] <= cfg.feas_tol
        _pivot(T, basis, row, col)
        state.note_pivot(degenerate)


def solve(lp: StandardFormLP, config: SimplexConfig = DEFAULT_CONFIG) -> LPSolution:
    """Two-phase simplex solve of a standard-form LP.

    Returns an LPSolution whose x is a basic feasible optimum when the
    status is OPTIMAL. INFEASIBLE means the phase-1 optimum stayed above
    the feasibility tolerance; UNBOUNDED means a descent direction with no
    blocking ratio was found in phase 2.
    """
    m, n = lp.n_rows, lp.n_vars
    A = lp.constraint_matrix.copy()
    b = lp.rhs.copy()
    c = lp.objective.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # phase 1: artificial basis, minimize the artificial sum
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = np.arange(n, n + m)
    eligible = np.zeros(n + m, dtype=bool)
    eligible[:n] = True  # artificials never re-enter

    state = _PivotState(config, m, n)
    outcome = _run(T, basis, eligible, state)
    if outcome == "unbounded":  # phase-1 objective is bounded below by 0
        raise RuntimeError("phase 1 reported unbounded; numerical trouble")
    if -T[-1, -1] > config.feas_tol * (1.0 + float(np.max(np.abs(b), initial=0.0))):
        return LPSolution(status=LPStatus.INFEASIBLE, iterations=state.pivots)

    # drive leftover artificials out of the basis; drop redundant rows
    drop = []
    for i in range(m):
        if basis[i] >= n:
            row = T[i, :n]
            nonzero = np.flatnonzero(np.abs(row) > config.pivot_tol)
            if nonzero.size:
                _pivot(T, basis, i, int(nonzero[0]))
                state.note_pivot(True)
            else:
                drop.append(i)
    keep = [i for i in range(m) if i not in drop]
    m2 = len(keep)

    # phase 2 on the original columns with the phase-1 basis
    T2 = np.zeros((m2 + 1, n + 1))
    T2[:m2, :n] = T[keep, :n]
    T2[:m2, -1] = T[keep, -1]
    basis2 = basis[keep]
    red = c.copy()
    corner = 0.0
    for i, bv in enumerate(basis2):
        red -= c[bv] * T2[i, :n]
        corner -= c[bv] * T2[i, -1]
    T2[-1, :n] = red
    T2[-1, -1] = corner

    outcome = _run(T2, basis2, np.ones(n, dtype=bool), state)
    if outcome == "unbounded":
        return LPSolution(status=LPStatus.UNBOUNDED, iterations=state.pivots)

    x = np.zeros(n)
    x[basis2] = T2[:m2, -1]
    return LPSolution(
        status=LPStatus.OPTIMAL,
        x=x,
        objective_value=float(c @ x),
        iterations=state.pivots,
    )


def _support_solution(M: np.ndarray, rhs: np.ndarray, cols: tuple, tol: float):
    """Solve M[:, cols] z = rhs exactly enough; return z >= 0 or None."""
    if len(cols) == 0:
        return np.zeros(0) if float(np.max(np.abs(rhs), initial=0.0)) <= tol else None
    sub = M[:, cols]
    z, *_ = np.linalg.lstsq(sub, rhs, rcond=None)
    if float(np.max(np.abs(sub @ z - rhs))) > tol:
        return None
    if float(z.min()) < -1e-9:
        return None
    return z


def enumerate_vertices_oracle(
    lp: StandardFormLP, config: SimplexConfig = DEFAULT_CONFIG
) -> LPSolution:
    """Exact reference optimum by exhaustive basic-solution enumeration.

    Tries every column subset of size at most m as a support, keeping
    consistent nonnegative solutions; unboundedness is detected by
    enumerating the vertices of the normalized recession polytope
    {d : A d = 0, sum d = 1, d >= 0} and checking for a negative-cost ray.
    Test-only: guarded to n <= 20 variables and m <= 10 rows.
    """
    m, n = lp.n_rows, lp.n_vars
    if n > ORACLE_MAX_VARS or m > ORACLE_MAX_ROWS:
        raise ValueError(f"oracle guard exceeded: n={n} (max {ORACLE_MAX_VARS}), "
                         f"m={m} (max {ORACLE_MAX_ROWS})")
    A = lp.constraint_matrix
    b = lp.rhs
    c = lp.objective
    feas_tol = 1e-8 * (1.0 + float(np.max(np.abs(b), initial=0.0)))

    best_obj = None
    best_x = None
    for k in range(0, m + 1):
        for cols in combinations(range(n), k):
            z = _support_solution(A, b, cols, feas_tol)
            if z is None:
                continue
            x = np.zeros(n)
            x[list(cols)] = z
            obj = float(c @ x)
            if best_obj is None or obj < best_obj:
                best_obj, best_x = obj, x
    if best_obj is None:
        return LPSolution(status=LPStatus.INFEASIBLE)

    ray_m = np.vstack([A, np.ones(n)])
    ray_rhs = np.zeros(m + 1)
    ray_rhs[-1] = 1.0
    for k in range(1, m + 2):
        for cols in combinations(range(n), k):
            z = _support_solution(ray_m, ray_rhs, cols, 1e-8)
            if z is None:
                continue
            d = np.zeros(n)
            d[list(cols)] = z
            if float(c @ d) < -1e-8:
                return LPSolution(status=LPStatus.UNBOUNDED)

    return LPSolution(status=LPStatus.OPTIMAL, x=best_x, objective_value=best_obj)
