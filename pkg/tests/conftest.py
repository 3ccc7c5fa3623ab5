from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from olg.stage_game import BUNDLED_GAMES, StageGame, load_bundled


@pytest.fixture(scope="session")
def pd() -> StageGame:
    return load_bundled("prisoners_dilemma")


@pytest.fixture(scope="session")
def coord() -> StageGame:
    return load_bundled("coordination")


@pytest.fixture(scope="session")
def rect() -> StageGame:
    return load_bundled("rectangle")


@pytest.fixture(scope="session")
def bundled() -> dict[str, StageGame]:
    return {name: load_bundled(name) for name in BUNDLED_GAMES}


def prof(g: StageGame, *labels: str):
    return tuple(g.profile_by_label(s) for s in labels)


def F(x) -> Fraction:
    return Fraction(x)


def _solve(M, rhs):
    """Exact Gaussian elimination; None when M is singular."""
    n = len(M)
    A = [list(row) + [r] for row, r in zip(M, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def caratheodory_member(p, pts) -> bool:
    """Reference hull membership that never touches the simplex code.

    By Caratheodory a point of the hull lies in the hull of some affinely
    independent subset of at most d+1 points; each subset is checked with an
    exact barycentric solve.
    """
    p = [Fraction(x) for x in p]
    pts = [[Fraction(x) for x in q] for q in pts]
    d = len(p)
    if p in pts:
        return True
    for size in range(2, min(d + 1, len(pts)) + 1):
        for sub in itertools.combinations(pts, size):
            base = sub[0]
            # p = base + sum c_j (q_j - base); independent edges make c unique,
            # so the first nonsingular choice of rows decides the subset
            edges = [[q[i] - base[i] for i in range(d)] for q in sub[1:]]
            target = [p[i] - base[i] for i in range(d)]
            for rows in itertools.combinations(range(d), size - 1):
                M = [[e[r] for e in edges] for r in rows]
                c = _solve(M, [target[r] for r in rows])
                if c is None:
                    continue
                if any(sum(cj * e[i] for cj, e in zip(c, edges)) != target[i] for i in range(d)):
                    break
                if all(cj >= 0 for cj in c) and sum(c) <= 1:
                    return True
                break
    return False


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
