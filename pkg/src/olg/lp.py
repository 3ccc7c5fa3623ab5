"""Phase-1 simplex over exact rationals.

Only feasibility is needed anywhere in the package: every geometric
question (hull membership, exposed faces) reduces to "does ``A x = b,
x >= 0`` have a solution".  Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)


def find_feasible(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Return some ``x >= 0`` with ``A x = b``, or None if there is none."""
    m = len(A)
    if m != len(b):
        raise ValueError("row count of A does not match length of b")
    ncols = len(A[0]) if m else 0
    if m == 0:
        return [_ZERO] * ncols

    # tableau rows: [A | I | b] with b >= 0; artificials occupy ncols..ncols+m-1
    rows = []
    for i in range(m):
        if len(A[i]) != ncols:
            raise ValueError("ragged constraint matrix")
        sign = -1 if b[i] < 0 else 1
        row = [Fraction(sign * x) for x in A[i]]
        row.extend(_ONE if k == i else _ZERO for k in range(m))
        row.append(Fraction(sign * b[i]))
        rows.append(row)
    width = ncols + m
    basis = list(range(ncols, ncols + m))

    # reduced costs of minimising the artificial sum
    cost = [_ZERO] * (width + 1)
    for row in rows:
        for j in range(ncols):
            if row[j]:
                cost[j] -= row[j]
        cost[width] -= row[width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # phase-1 objective is bounded below by zero
            raise RuntimeError("unbounded phase-1 problem")
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [_ZERO] * ncols
    for i, var in enumerate(basis):
        if var < ncols:
            x[var] = rows[i][width]
    return x


def _pivot(rows, cost, r, c):
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        prow[:] = [x * inv for x in prow]
    nz = [j for j, x in enumerate(prow) if x]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = cost[c]
    if f:
        for j in nz:
            cost[j] -= f * prow[j]
