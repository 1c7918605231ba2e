"""Dense LP and zero-sum matrix game engine.

A two-phase tableau simplex with a largest-coefficient pivot rule and a
Bland's-rule fallback once a budget of degenerate pivots is exhausted.
Problem sizes in this package are tiny (at most a few hundred variables),
so a dense tableau is the right tool.

All numeric tolerances used by the solver live here as module constants.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure

# Solver tolerances (single source of truth).
PIVOT_TOL = 1e-10        # entries below this are treated as zero pivots
FEAS_TOL = 1e-9          # feasibility / optimality tolerance
VALUE_AGREEMENT_TOL = 2e-9   # row-LP vs column-LP game value agreement
DEGENERATE_BUDGET = 50   # degenerate pivots before switching to Bland's rule
MAX_ITERATIONS = 20000


@dataclass(frozen=True)
class LinearProgram:
    """min/max objective @ x  s.t.  matrix @ x (<= | ==) bounds, x >= 0."""

    objective: np.ndarray
    matrix: np.ndarray
    bounds: np.ndarray
    senses: tuple
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        a = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        b = np.asarray(self.bounds, dtype=float)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "bounds", b)
        object.__setattr__(self, "senses", tuple(self.senses))
        if a.shape[0] != b.shape[0]:
            raise ValueError("constraint matrix and bounds length mismatch")
        if a.shape[1] != c.shape[0]:
            raise ValueError("constraint matrix and objective length mismatch")
        if len(self.senses) != a.shape[0]:
            raise ValueError("one sense per constraint required")
        for s in self.senses:
            if s not in ("<=", "=="):
                raise ValueError(f"unsupported constraint sense {s!r}")


@dataclass(frozen=True)
class LPResult:
    status: str          # "optimal" | "infeasible" | "unbounded"
    value: float
    x: np.ndarray        # primal solution (original variables)
    y: np.ndarray        # dual solution, one entry per original constraint


@dataclass(frozen=True)
class GameSolution:
    """Equilibrium of a finite zero-sum matrix game."""

    value: float
    row_strategy: np.ndarray
    col_strategy: np.ndarray


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    # kill round-off in the pivot column
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run_simplex(T, basis, allowed):
    """Minimize the objective encoded in the last tableau row.

    T has shape (m+1, n+1): m constraint rows, reduced-cost row last,
    right-hand side in the last column.  Returns "optimal" or "unbounded".
    """
    m = T.shape[0] - 1
    degenerate = 0
    use_bland = False
    for _ in range(MAX_ITERATIONS):
        red = T[-1, :-1]
        if use_bland:
            candidates = np.flatnonzero(allowed & (red < -PIVOT_TOL))
            if candidates.size == 0:
                return "optimal"
            col = candidates[0]
        else:
            masked = np.where(allowed, red, np.inf)
            col = int(np.argmin(masked))
            if masked[col] >= -FEAS_TOL:
                return "optimal"
        column = T[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL]
        # lowest basis index among ties (Bland-compatible leaving rule)
        row = ties[int(np.argmin(basis[ties]))]
        if best <= PIVOT_TOL:
            degenerate += 1
            if degenerate > DEGENERATE_BUDGET:
                use_bland = True
        else:
            degenerate = 0
        _pivot(T, basis, row, col)
    raise NumericalFailure("simplex iteration limit exceeded")


def solve_lp(lp: LinearProgram) -> LPResult:
    """Solve a small dense LP, returning primal and dual solutions.

    When the status is "optimal" the primal satisfies every constraint
    within FEAS_TOL and the dual closes the strong-duality gap.
    """
    c = lp.objective.copy()
    if lp.maximize:
        c = -c
    a = lp.matrix.copy()
    b = lp.bounds.copy()
    m, n = a.shape

    # Equality standard form: slacks for "<=" rows, then make b >= 0.
    slack_rows = [i for i, s in enumerate(lp.senses) if s == "<="]
    n_slack = len(slack_rows)
    aeq = np.hstack([a, np.zeros((m, n_slack))])
    for col, row in enumerate(slack_rows):
        aeq[row, n + col] = 1.0
    ceq = np.concatenate([c, np.zeros(n_slack)])
    flipped = b < 0
    aeq[flipped] *= -1.0
    b = np.where(flipped, -b, b)
    n_real = n + n_slack

    # Phase 1: artificial basis, minimize artificial mass.
    T = np.zeros((m + 1, n_real + m + 1))
    T[:m, :n_real] = aeq
    T[:m, n_real:n_real + m] = np.eye(m)
    T[:m, -1] = b
    basis = np.arange(n_real, n_real + m)
    T[-1, n_real:n_real + m] = 1.0
    T[-1] -= T[:m].sum(axis=0)
    allowed = np.ones(n_real + m, dtype=bool)
    status = _run_simplex(T, basis, allowed)
    phase1 = -T[-1, -1]
    if status != "optimal" or phase1 > 1e-7:
        return LPResult("infeasible", np.nan, np.full(n, np.nan),
                        np.full(m, np.nan))

    # Drive remaining artificials out of the basis; drop redundant rows.
    keep_rows = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] >= n_real:
            real = np.flatnonzero(np.abs(T[r, :n_real]) > PIVOT_TOL)
            if real.size:
                _pivot(T, basis, r, real[0])
            else:
                keep_rows[r] = False

    rows_idx = np.flatnonzero(keep_rows)
    T2 = np.zeros((rows_idx.size + 1, n_real + 1))
    T2[:-1, :n_real] = T[rows_idx, :n_real]
    T2[:-1, -1] = T[rows_idx, -1]
    basis2 = basis[rows_idx].copy()
    T2[-1, :n_real] = ceq
    for r, bv in enumerate(basis2):
        coeff = T2[-1, bv]
        if abs(coeff) > 0.0:
            T2[-1] -= coeff * T2[r]
    status = _run_simplex(T2, basis2, np.ones(n_real, dtype=bool))
    if status == "unbounded":
        return LPResult("unbounded", np.nan, np.full(n, np.nan),
                        np.full(m, np.nan))

    x_full = np.zeros(n_real)
    x_full[basis2] = T2[:-1, -1]
    x = x_full[:n]
    value = float(ceq @ x_full)

    # Duals from the final basis: y solves B^T y = c_B over kept rows.
    y = np.zeros(m)
    if rows_idx.size:
        bmat = aeq[np.ix_(rows_idx, basis2)]
        try:
            y_kept = np.linalg.solve(bmat.T, ceq[basis2])
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("singular basis in dual recovery") from exc
        y[rows_idx] = y_kept
    y = np.where(flipped, -y, y)
    if lp.maximize:
        return LPResult("optimal", -value, x, -y)
    return LPResult("optimal", value, x, y)


def _clean_simplex(v):
    v = np.where(np.abs(v) < 1e-12, 0.0, np.maximum(v, 0.0))
    total = v.sum()
    if total > 0:
        v = v / total
    return v


def _row_lp(U):
    """min v s.t. U^T x <= v, sum(x) = 1, x >= 0; v free (split)."""
    m, n = U.shape
    c = np.zeros(m + 2)
    c[m] = 1.0
    c[m + 1] = -1.0
    a = np.zeros((n + 1, m + 2))
    a[:n, :m] = U.T
    a[:n, m] = -1.0
    a[:n, m + 1] = 1.0
    a[n, :m] = 1.0
    b = np.zeros(n + 1)
    b[n] = 1.0
    senses = ("<=",) * n + ("==",)
    return solve_lp(LinearProgram(c, a, b, senses))


def _column_lp(U):
    """max u s.t. U y >= u, sum(y) = 1, y >= 0; the maximizer's side."""
    m, n = U.shape
    c = np.zeros(n + 2)
    c[n] = 1.0
    c[n + 1] = -1.0
    a = np.zeros((m + 1, n + 2))
    a[:m, :n] = -U
    a[:m, n] = 1.0
    a[:m, n + 1] = -1.0
    a[m, :n] = 1.0
    b = np.zeros(m + 1)
    b[m] = 1.0
    senses = ("<=",) * m + ("==",)
    return solve_lp(LinearProgram(c, a, b, senses, maximize=True))


def solve_zero_sum(U, row_minimizes: bool = True) -> GameSolution:
    """Value and equilibrium strategies of a finite zero-sum matrix game.

    With row_minimizes=True the value is min over row mixtures x of
    max_j sum_i x_i U_ij; the column strategy is recovered from the
    row LP's duals, with a second symmetric LP as fallback.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    if U.size == 0 or not np.all(np.isfinite(U)):
        raise ValueError("game matrix must be finite and non-empty")
    if not row_minimizes:
        inner = solve_zero_sum(-U, row_minimizes=True)
        return GameSolution(-inner.value, inner.row_strategy,
                            inner.col_strategy)

    m, n = U.shape
    res = _row_lp(U)
    if res.status != "optimal":
        raise NumericalFailure(f"row LP ended with status {res.status}")
    value = float(res.value)
    x = _clean_simplex(res.x[:m])
    # duals of the "<=" rows are nonpositive for this minimization
    y = _clean_simplex(-res.y[:n])
    sol = GameSolution(value, x, y)
    if not verify_equilibrium(U, sol, FEAS_TOL * 10):
        col = _column_lp(U)
        if col.status != "optimal":
            raise NumericalFailure(f"column LP ended with status {col.status}")
        if abs(col.value - value) > VALUE_AGREEMENT_TOL:
            raise NumericalFailure("row and column LP values disagree")
        sol = GameSolution(value, x, _clean_simplex(col.x[:n]))
    return sol


def verify_equilibrium(U, sol: GameSolution, tol: float) -> bool:
    """Check simplex membership and best-response gaps of a solution.

    The row player is the minimizer: no pure column may earn more than
    value + tol against the row strategy, and no pure row may pay less
    than value - tol against the column strategy.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    x = np.asarray(sol.row_strategy, dtype=float)
    y = np.asarray(sol.col_strategy, dtype=float)
    if x.shape[0] != U.shape[0] or y.shape[0] != U.shape[1]:
        return False
    for v in (x, y):
        if np.any(v < -1e-9) or abs(v.sum() - 1.0) > 1e-9:
            return False
    if np.max(x @ U) > sol.value + tol:
        return False
    if np.min(U @ y) < sol.value - tol:
        return False
    return True
