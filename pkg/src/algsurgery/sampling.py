"""Constructive samplers for valid structured complexes, pairs and cobordisms.

Everything is built from a small Poincare seed (spheres, forms in the middle
degree) by operations that preserve validity: adding contractible pieces,
changing bases and adding boundaries of higher structures.  Relative
structures on pairs are found by solving the pair relations as an integer
linear system.  Unsolvable draws are discarded.
"""

from __future__ import annotations

import random

from .chains import ChainComplex, ChainError, ChainMap
from .linalg import solve_affine
from .rings import Matrix, Ring
from .structures import (QUAD, SYM, QuadraticComplex, StructuredComplex, StructuredPair, SymmetricComplex,
                         direct_sum_structure, is_poincare, pair_residual, quad_residual, sym_residual, transport)


def random_matrix(R: Ring, rng: random.Random, m: int, n: int, bound: int = 1) -> Matrix:
    return Matrix(R, m, n, [[R.random_elem(rng, bound) for _ in range(n)] for _ in range(m)])


def random_unimodular(R: Ring, rng: random.Random, n: int, steps: int = 3):
    """A product of elementary matrices and its inverse."""
    U, Ui = Matrix.identity(R, n), Matrix.identity(R, n)
    if n < 2:
        return U, Ui
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([1, -1])
        U = Matrix.identity(R, n).with_entry(i, j, c) @ U
        Ui = Ui @ Matrix.identity(R, n).with_entry(i, j, -c)
    return U, Ui


def random_complex(R: Ring, rng: random.Random, lo: int, hi: int, max_rank: int = 2) -> ChainComplex:
    while True:
        ranks = [rng.randint(0, max_rank) for _ in range(hi - lo + 1)]
        d = {r: random_matrix(R, rng, ranks[r - 1 - lo], ranks[r - lo])
             for r in range(lo + 1, hi + 1) if rng.random() < 0.5}
        try:
            return ChainComplex(R, lo, ranks, d)
        except ChainError:
            pass


def random_chain_map(C: ChainComplex, D: ChainComplex, rng: random.Random) -> ChainMap:
    R = C.ring
    degs = list(C.degrees())
    shapes = [(D.rank(r), C.rank(r)) for r in degs]

    def residual(xs):
        f = dict(zip(degs, xs))
        g = lambda r: f.get(r, Matrix.zeros(R, D.rank(r), C.rank(r)))
        return [D.d(r) @ g(r) - g(r - 1) @ C.d(r) for r in range(C.lo, C.hi + 2)]

    return ChainMap(C, D, dict(zip(degs, solve_affine(R, shapes, residual, rng=rng))))


def sphere_structure(R: Ring, n: int, kind: str = SYM) -> StructuredComplex:
    """The minimal complex of S^n with its fundamental class.

    The quadratic version puts the whole class in one corner, psi_0 = 1 on
    C^n -> C_0 (for n = 0 a rank-2 form with (1+T)psi_0 = 1).
    """
    if n == 0:
        C = ChainComplex(R, 0, [2])
        if kind == SYM:
            return SymmetricComplex(C, 0, {(0, 0): Matrix.identity(R, 2)})
        raise ValueError("S^0 carries no quadratic structure with (1+T)psi_0 = 1")
    ranks = [0] * (n + 1)
    ranks[0] = ranks[n] = 1
    C = ChainComplex(R, 0, ranks)
    one = Matrix.identity(R, 1)
    if kind == SYM:
        return SymmetricComplex(C, n, {(0, 0): one, (0, n): one})
    return QuadraticComplex(C, n, {(0, 0): one})


def form_seed(R: Ring, rng: random.Random, n: int) -> StructuredComplex:
    """Quadratic complex concentrated in degree n/2 with a random nonsingular form."""
    i = n // 2
    for _ in range(100):
        k = rng.randint(1, 2)
        M = [[0] * (2 * k) for _ in range(2 * k)]
        for t in range(k):
            M[2 * t][2 * t + 1] = 1
        for a in range(2 * k):
            for b in range(a, 2 * k):
                if rng.random() < 0.3:
                    M[a][b] += rng.choice([-1, 1])
        ranks = [0] * (n + 1)
        ranks[i] = 2 * k
        X = QuadraticComplex(ChainComplex(R, 0, ranks), n, {(0, i): Matrix(R, 2 * k, 2 * k, M)})
        if is_poincare(X).ok:
            return X
    raise RuntimeError("no nonsingular form found")


def add_contractible(X: StructuredComplex, rng: random.Random) -> StructuredComplex:
    C = X.C
    if C.hi <= C.lo:
        return X
    r = rng.randint(C.lo + 1, C.hi)
    E = ChainComplex(C.ring, C.lo, [1 if t in (r, r - 1) else 0 for t in C.degrees()],
                     {r: Matrix.identity(C.ring, 1)})
    return direct_sum_structure(X, StructuredComplex(X.kind, E, X.n, {}))


def change_basis(X: StructuredComplex, rng: random.Random) -> StructuredComplex:
    C, R = X.C, X.ring
    Us = {r: random_unimodular(R, rng, C.rank(r)) for r in C.degrees()}
    d = {r: Us[r - 1][0] @ C.d(r) @ Us[r][1] for r in range(C.lo + 1, C.hi + 1)}
    new = ChainComplex(R, C.lo, C.ranks, d)
    return transport(X, ChainMap(C, new, {r: Us[r][0] for r in C.degrees()}))


def _coboundary(C: ChainComplex, n: int, kind: str, rng: random.Random, smax: int):
    """Random chi of dimension n+1 and the map (s, r) -> its boundary component."""
    R = C.ring
    src = (lambda s, r: n + 1 - r + s) if kind == SYM else (lambda s, r: n + 1 - r - s)
    chi = {}
    for s in range(0, smax + 1):
        for r in C.degrees():
            p = src(s, r)
            if C.rank(p) and C.rank(r) and rng.random() < 0.5:
                chi[(s, r)] = random_matrix(R, rng, C.rank(r), C.rank(p))

    def comp(s, r):
        m = chi.get((s, r))
        return m if m is not None else Matrix.zeros(R, C.rank(r), C.rank(src(s, r)))

    residual = sym_residual if kind == SYM else quad_residual
    return lambda s, r: residual(C, n + 1, comp, s, r)


def add_boundary(X: StructuredComplex, rng: random.Random) -> StructuredComplex:
    """X plus the boundary of a random (n+1)-dimensional chain: still valid, same class."""
    C, n = X.C, X.n
    bd = _coboundary(C, n, X.kind, rng, n + 1)
    maps = {}
    for s in range(0, X.support_bound() + 1):
        for r in C.degrees():
            if C.rank(r) and C.rank(X.src_degree(s, r)):
                maps[(s, r)] = X.comp(s, r) + bd(s, r)
    return StructuredComplex(X.kind, C, n, maps)


def random_symmetric(R: Ring, rng: random.Random, n: int) -> StructuredComplex:
    X = sphere_structure(R, n)
    if rng.random() < 0.5:
        X = direct_sum_structure(X, sphere_structure(R, n))
    return _dress(X, rng)


def random_quadratic(R: Ring, rng: random.Random, n: int, seed: StructuredComplex | None = None):
    if seed is not None:
        X = seed
    elif n % 2 == 0:
        X = form_seed(R, rng, n)
    else:
        X = QuadraticComplex(ChainComplex(R, 0, [0] * (n + 1)), n, {})
        if rng.random() < 0.5:
            X = sphere_structure(R, n, QUAD)
    return _dress(X, rng)


def _dress(X: StructuredComplex, rng: random.Random) -> StructuredComplex:
    for _ in range(rng.randint(0, 2)):
        X = add_contractible(X, rng)
    X = change_basis(X, rng)
    if rng.random() < 0.7:
        X = add_boundary(X, rng)
    return X


def random_pair(X: StructuredComplex, rng: random.Random, max_rank: int = 2, tries: int = 50):
    """Valid surgery data (j: C -> D, (delta, X)) with D in degrees [0, n+1], or None."""
    n, C, R = X.n, X.C, X.ring
    quad = X.kind == QUAD
    for _ in range(tries):
        D = random_complex(R, rng, 0, n + 1, max_rank)
        j = random_chain_map(C, D, rng)
        src = (lambda s, r: n + 1 - r - s) if quad else (lambda s, r: n + 1 - r + s)
        keys = [(s, r) for s in range(0, n + 2) for r in D.degrees()
                if D.rank(r) and src(s, r) >= 0 and D.rank(src(s, r))]
        shapes = [(D.rank(r), D.rank(src(s, r))) for s, r in keys]

        def residual(xs):
            P = StructuredPair(j, X, dict(zip(keys, xs)))
            return [pair_residual(P, s, r) for s in range(0, n + 3) for r in range(-1, n + 3)]

        sol = solve_affine(R, shapes, residual, rng=rng)
        if sol is not None:
            return StructuredPair(j, X, dict(zip(keys, sol)))
    return None


def perturb_pair(P: StructuredPair, rng: random.Random) -> StructuredPair:
    """Same boundary, delta moved by a boundary and D re-based: a different but valid pair."""
    D, n, R = P.D, P.n, P.ring
    bd = _coboundary(D, n + 1, P.kind, rng, n + 2)
    delta = {}
    for s in range(0, n + 3):
        for r in D.degrees():
            if D.rank(r) and D.rank(P.src_degree(s, r)):
                delta[(s, r)] = P.dcomp(s, r) + bd(s, r)
    Us = {r: random_unimodular(R, rng, D.rank(r)) for r in D.degrees()}
    d = {r: Us[r - 1][0] @ D.d(r) @ Us[r][1] for r in range(D.lo + 1, D.hi + 1)}
    Dn = ChainComplex(R, D.lo, D.ranks, d)
    j = ChainMap(P.C, Dn, {r: Us[r][0] @ P.j[r] for r in P.C.degrees()})
    delta = {(s, r): Us[r][0] @ m @ Us[P.src_degree(s, r)][0].star() for (s, r), m in delta.items() if not m.is_zero()}
    return StructuredPair(j, P.boundary, delta)


def _as_cobordism(P: StructuredPair, left: StructuredComplex, right: StructuredComplex):
    from .surgery import make_cobordism

    D, a = P.D, left.C
    cut = lambda src, off: ChainMap(src, D, {r: P.j[r].submatrix(range(D.rank(r)), range(off(r), off(r) + src.rank(r)))
                                           for r in src.degrees()})
    return make_cobordism(cut(left.C, lambda r: 0), cut(right.C, a.rank), P.delta, left, right)


def random_trace(X: StructuredComplex, rng: random.Random, max_rank: int = 2):
    """A perturbed trace cobordism from X, or None if no data was found."""
    from .surgery import trace

    P = random_pair(X, rng, max_rank)
    if P is None:
        return None
    out = trace(P)
    return _as_cobordism(perturb_pair(out.trace, rng), X, out.effect)


def random_composite_cobordism(R: Ring, rng: random.Random, n: int, kind: str):
    """The union of two consecutive random traces."""
    from .surgery import glue

    while True:
        X = random_symmetric(R, rng, n) if kind == SYM else random_quadratic(R, rng, n)
        G1 = random_trace(X, rng)
        if G1 is None:
            continue
        G2 = random_trace(G1.right, rng)
        if G2 is not None:
            return glue(G1, G2)
