"""Linear algebra over Z, Q and Z[Z/k] by restriction of scalars to Z."""

from __future__ import annotations

from fractions import Fraction

from .rings import CyclicGroupRing, Integers, Matrix, Rationals, Ring, RingError
from .smith import smith_normal_form


def restrict_matrix(M: Matrix) -> list[list[int]]:
    """Integer matrix of M acting on the Z-basis {e_i g^m}."""
    ring = M.ring
    if isinstance(ring, Integers):
        return [list(r) for r in M.data]
    if not isinstance(ring, CyclicGroupRing):
        raise RingError(f"restriction of scalars is not defined over {ring}")
    k = ring.k
    out = [[0] * (M.ncols * k) for _ in range(M.nrows * k)]
    for p, row in enumerate(M.data):
        for q, a in enumerate(row):
            if a:
                c = a.coeffs
                for u in range(k):
                    orow = out[p * k + u]
                    for v in range(k):
                        orow[q * k + v] = c[(u - v) % k]
    return out


def restrict_vector(ring: Ring, column) -> list[int]:
    out = []
    for a in column:
        out.extend(ring.to_ints(a))
    return out


def unrestrict_vector(ring: Ring, v) -> list:
    k = ring.zrank
    return [ring.from_ints(v[i * k:(i + 1) * k]) for i in range(len(v) // k)]


def rank(M: Matrix) -> int:
    """Rank over the fraction field (Z, Q) or of the restricted Z-matrix (Z[Z/k])."""
    if isinstance(M.ring, Rationals):
        return _rank_q([list(r) for r in M.data])
    return smith_normal_form(restrict_matrix(M), M.ncols * M.ring.zrank).rank


def _rank_q(rows) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_right(M: Matrix, B: Matrix) -> Matrix | None:
    """Some X with M X = B, or None if no solution exists over the ring."""
    ring = M.ring
    if B.nrows != M.nrows:
        raise ValueError("row counts differ")
    if isinstance(ring, Rationals):
        return _solve_q(M, B)
    k = ring.zrank
    A = restrict_matrix(M)
    n = M.ncols * k
    snf = smith_normal_form(A, n)
    cols = []
    for q in range(B.ncols):
        b = restrict_vector(ring, [B.data[p][q] for p in range(B.nrows)])
        c = [sum(u * x for u, x in zip(row, b)) for row in snf.U]
        y = [0] * n
        for t, ct in enumerate(c):
            d = snf.diag[t] if t < len(snf.diag) else 0
            if d:
                if ct % d:
                    return None
                y[t] = ct // d
            elif ct:
                return None
        x = [sum(v * yy for v, yy in zip(row, y)) for row in snf.V]
        cols.append(unrestrict_vector(ring, x))
    data = [[cols[q][p] for q in range(B.ncols)] for p in range(M.ncols)]
    return Matrix(ring, M.ncols, B.ncols, data)


def _solve_q(M: Matrix, B: Matrix) -> Matrix | None:
    m, n = M.nrows, M.ncols
    rows = [[Fraction(x) for x in M.data[i]] + [Fraction(x) for x in B.data[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if any(x != 0 for x in rows[i][n:]):
            return None
    X = [[Fraction(0)] * B.ncols for _ in range(n)]
    for i, c in enumerate(pivots):
        X[c] = rows[i][n:]
    return Matrix(M.ring, n, B.ncols, X)


def is_invertible(M: Matrix) -> bool:
    """Square M invertible over its ring."""
    if M.nrows != M.ncols:
        return False
    if M.nrows == 0:
        return True
    return solve_right(M, Matrix.identity(M.ring, M.nrows)) is not None


def inverse(M: Matrix) -> Matrix:
    X = solve_right(M, Matrix.identity(M.ring, M.nrows)) if M.nrows == M.ncols else None
    if X is None:
        raise RingError("matrix is not invertible over its ring")
    return X


def determinant_z(rows: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_affine(ring: Ring, shapes, residual, rng=None, spread: int = 1):
    """Find matrices X_1..X_m (given shapes) with residual(X) == all-zero.

    ``residual`` maps a list of matrices to a list of matrices and must be
    affine in its argument.  The system is assembled by evaluating it on
    basis unknowns and solved over Z after restriction of scalars.  With
    ``rng`` a random kernel element (coefficients in [-spread, spread]) is
    added to the particular solution.  Returns None when unsolvable.
    """
    if isinstance(ring, Rationals):
        raise RingError("solve_affine works over Z and Z[Z/k]")
    k = ring.zrank
    zeros = [Matrix.zeros(ring, r, c) for r, c in shapes]

    def flat(mats):
        v = []
        for m in mats:
            for row in m.data:
                for a in row:
                    v.extend(ring.to_ints(a))
        return v

    base = flat(residual(zeros))
    columns = []
    index = []
    for u, (r, c) in enumerate(shapes):
        for i in range(r):
            for j in range(c):
                for m in range(k):
                    coords = [0] * k
                    coords[m] = 1
                    trial = list(zeros)
                    trial[u] = zeros[u].with_entry(i, j, ring.from_ints(coords))
                    col = flat(residual(trial))
                    columns.append([a - b for a, b in zip(col, base)])
                    index.append((u, i, j, m))
    nvar = len(columns)
    if nvar == 0:
        return zeros if not any(base) else None
    A = [[columns[v][e] for v in range(nvar)] for e in range(len(base))]
    from .smith import solve_integer

    sol = solve_integer(A, [-b for b in base], nvar)
    if sol is None:
        return None
    x, kernel = sol
    if rng is not None and kernel:
        for vec in kernel:
            c = rng.randint(-spread, spread)
            if c:
                x = [a + c * b for a, b in zip(x, vec)]
    vals = [[[[0] * k for _ in range(c)] for _ in range(r)] for r, c in shapes]
    for (u, i, j, m), a in zip(index, x):
        vals[u][i][j][m] = a
    return [Matrix(ring, r, c, [[ring.from_ints(vals[u][i][j]) for j in range(c)] for i in range(r)])
            for u, (r, c) in enumerate(shapes)]


def integer_kernel_ring(M: Matrix) -> list[Matrix]:
    """Column vectors spanning {x : M x = 0} as an abelian group (Z and Z[Z/k])."""
    from .smith import integer_kernel

    ring = M.ring
    if isinstance(ring, Rationals):
        raise RingError("integer_kernel_ring works over Z and Z[Z/k]")
    basis = integer_kernel(restrict_matrix(M), M.ncols * ring.zrank)
    return [Matrix(ring, M.ncols, 1, [[a] for a in unrestrict_vector(ring, v)]) for v in basis]
