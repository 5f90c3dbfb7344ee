"""Smith normal form over Z with transforms, and integer linear systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass
class SmithForm:
    """U A V = D with U, V unimodular; ``diag`` holds d_1 | d_2 | ... (zeros last)."""

    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    Uinv: list[list[int]]
    Vinv: list[list[int]]
    diag: list[int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    D = [list(map(int, row)) for row in A]
    U, Uinv = _identity(m), _identity(m)
    V, Vinv = _identity(n), _identity(n)

    # Row op "row i1, row i2 <- (a b; c e) applied" keeps U D V invariant:
    # D <- R D, U <- R U, Uinv <- Uinv R^{-1}.
    def rows(i1, i2, a, b, c, e):
        # R acts on rows i1, i2; det R = a*e - b*c = +-1
        for M in (D, U):
            r1, r2 = M[i1], M[i2]
            M[i1] = [a * x + b * y for x, y in zip(r1, r2)]
            M[i2] = [c * x + e * y for x, y in zip(r1, r2)]
        det = a * e - b * c
        ia, ib, ic, ie = e * det, -b * det, -c * det, a * det
        for row in Uinv:
            x, y = row[i1], row[i2]
            row[i1] = x * ia + y * ic
            row[i2] = x * ib + y * ie

    def cols(j1, j2, a, b, c, e):
        # C acts on columns: new col j1 = a*col j1 + c*col j2, new col j2 = b*col j1 + e*col j2
        for M in (D, V):
            for row in M:
                x, y = row[j1], row[j2]
                row[j1] = a * x + c * y
                row[j2] = b * x + e * y
        det = a * e - b * c
        ia, ib, ic, ie = e * det, -b * det, -c * det, a * det
        r1, r2 = Vinv[j1], Vinv[j2]
        Vinv[j1] = [ia * x + ib * y for x, y in zip(r1, r2)]
        Vinv[j2] = [ic * x + ie * y for x, y in zip(r1, r2)]

    def rnd(b, a):
        # nearest-integer quotient keeps remainders (and transforms) small
        q, r = divmod(b, a)
        if 2 * abs(r) > abs(a):
            q += 1 if (r > 0) == (a > 0) else -1
        return q

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            rows(t, pi, 0, 1, 1, 0)
        if pj != t:
            cols(t, pj, 0, 1, 1, 0)
        while True:
            a = D[t][t]
            for i in range(t + 1, m):
                b = D[i][t]
                if b:
                    rows(t, i, 1, 0, -rnd(b, a), 1)
            for j in range(t + 1, n):
                b = D[t][j]
                if b:
                    cols(t, j, 1, -rnd(b, a), 0, 1)
            # any remainder becomes the new, strictly smaller pivot
            small = None
            for i in range(t + 1, m):
                if D[i][t] and (small is None or abs(D[i][t]) < small[0]):
                    small = (abs(D[i][t]), i, "r")
            for j in range(t + 1, n):
                if D[t][j] and (small is None or abs(D[t][j]) < small[0]):
                    small = (abs(D[t][j]), j, "c")
            if small is not None:
                if small[2] == "r":
                    rows(t, small[1], 0, 1, 1, 0)
                else:
                    cols(t, small[1], 0, 1, 1, 0)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % a:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rows(t, bad, 1, 1, 0, 1)
        if D[t][t] < 0:
            _negate_row(D, U, Uinv, t)
        t += 1
    diag = [D[i][i] for i in range(min(m, n))]
    return SmithForm(D, U, V, Uinv, Vinv, diag)


def _negate_row(D, U, Uinv, t):
    D[t] = [-x for x in D[t]]
    U[t] = [-x for x in U[t]]
    for row in Uinv:
        row[t] = -row[t]


def int_rank(A: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return smith_normal_form(A, ncols).rank


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None):
    """Solve A x = b over Z.

    Returns ``(x, kernel)`` with ``kernel`` a Z-basis of {x : A x = 0}, or
    ``None`` when no integral solution exists.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    snf = smith_normal_form(A, n)
    c = mat_vec(snf.U, b)
    y = [0] * n
    for t in range(m):
        d = snf.diag[t] if t < len(snf.diag) else 0
        if d:
            if c[t] % d:
                return None
            y[t] = c[t] // d
        elif c[t]:
            return None
    x = mat_vec(snf.V, y)
    r = snf.rank
    kernel = [[snf.V[i][t] for i in range(n)] for t in range(r, n)]
    return x, kernel


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    snf = smith_normal_form(A, n)
    r = snf.rank
    return [[snf.V[i][t] for i in range(n)] for t in range(r, n)]
