"""Exact rational linear programming: two-phase tableau simplex with Bland's rule.

No floating point is involved anywhere; every pivot is done in ``Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Matrix = Sequence[Sequence]


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    value: Optional[Fraction] = None
    x: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _frac_rows(a: Optional[Matrix]) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in (a or [])]


def _pivot(t: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    pr = t[r]
    pv = pr[c]
    if pv != 1:
        t[r] = pr = [v / pv for v in pr]
    for i, row in enumerate(t):
        if i != r:
            f = row[c]
            if f:
                t[i] = [a - f * b for a, b in zip(row, pr)]
    basis[r] = c


def _simplex(t: list[list[Fraction]], basis: list[int], ncols: int, allowed: Optional[set] = None) -> str:
    """Minimize the objective held in the last row; columns ``0..ncols-1`` are variables.

    The objective row stores reduced costs; the rhs is the last column.
    """
    m = len(t) - 1
    while True:
        obj = t[-1]
        entering = None
        for j in range(ncols):
            if (allowed is None or j in allowed) and obj[j] < 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(m):
            a = t[i][entering]
            if a > 0:
                ratio = t[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(t, basis, best[1], entering)


def solve_lp(
    c: Sequence,
    A_eq: Optional[Matrix] = None,
    b_eq: Optional[Sequence] = None,
    A_ub: Optional[Matrix] = None,
    b_ub: Optional[Sequence] = None,
    free: Sequence[int] = (),
    maximize: bool = False,
) -> LPResult:
    """Minimize (or maximize) ``c.x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub``.

    Variables are nonnegative except those listed in ``free``.
    """
    n = len(c)
    cost = [Fraction(v) for v in c]
    if maximize:
        cost = [-v for v in cost]
    eq = _frac_rows(A_eq)
    ub = _frac_rows(A_ub)
    beq = [Fraction(v) for v in (b_eq or [])]
    bub = [Fraction(v) for v in (b_ub or [])]
    if len(eq) != len(beq) or len(ub) != len(bub) or any(len(r) != n for r in eq + ub):
        raise ValueError("constraint shapes do not match")

    # split free variables: x_j = x_j+ - x_j-; negative parts appended after the originals
    free = sorted(set(free))
    neg_col = {j: n + k for k, j in enumerate(free)}
    nv = n + len(free)

    def widen(row):
        return row + [-row[j] for j in free]

    rows = [widen(r) for r in eq] + [widen(r) for r in ub]
    rhs = beq + bub
    n_slack = len(ub)
    total = nv + n_slack
    full = []
    for i, r in enumerate(rows):
        slack = [Fraction(0)] * n_slack
        if i >= len(eq):
            slack[i - len(eq)] = Fraction(1)
        full.append(r + slack)
    for i in range(len(full)):
        if rhs[i] < 0:
            full[i] = [-v for v in full[i]]
            rhs[i] = -rhs[i]

    m = len(full)
    # phase one: one artificial per row
    width = total + m
    t = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        t.append(full[i] + art + [rhs[i]])
    basis = [total + i for i in range(m)]
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            if j < total or j == width:
                obj[j] -= t[i][j]
    t.append(obj)
    _simplex(t, basis, width)
    if t[-1][-1] != 0:
        return LPResult("infeasible")

    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= total:
            for j in range(total):
                if t[i][j] != 0:
                    _pivot(t, basis, i, j)
                    break
    keep = [i for i in range(m) if basis[i] < total]
    t = [t[i][:total] + [t[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    full_cost = cost + [-cost[j] for j in free] + [Fraction(0)] * n_slack
    obj = full_cost + [Fraction(0)]
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            obj = [a - f * v for a, v in zip(obj, t[i])]
    t.append(obj)
    status = _simplex(t, basis, total)
    if status == "unbounded":
        return LPResult("unbounded")
    values = [Fraction(0)] * total
    for i, b in enumerate(basis):
        values[b] = t[i][-1]
    x = [values[j] - (values[neg_col[j]] if j in neg_col else 0) for j in range(n)]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult("optimal", value, tuple(x))


def feasible(A_eq: Matrix, b_eq: Sequence, free: Sequence[int] = ()) -> Optional[tuple[Fraction, ...]]:
    """A nonnegative solution of ``A_eq x = b_eq`` if one exists."""
    width = len(A_eq[0]) if A_eq else 0
    r = solve_lp([0] * width, A_eq, b_eq, free=free)
    return r.x if r.optimal else None
