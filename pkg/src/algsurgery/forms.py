"""(-)^i-quadratic forms, lagrangians, formations and Witt invariants over Z.

A form on K = A^m is a matrix lam with lam = (-)^i lam^*, read as
lam(x, y) = x^* lam y, together with mu on basis vectors in Q_{(-)^i}(A).
mu extends by mu(x + y) = mu(x) + mu(y) + lam(x, y) and mu(ax) = a mu(x) abar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .chains import ChainComplex, Report, Verdict, betti
from .linalg import integer_kernel_ring, is_invertible, solve_right
from .rings import ZZ, Integers, Matrix, QClass, Ring, q_reduce
from .smith import smith_normal_form
from .structures import QUAD, QuadraticComplex, StructuredComplex, StructureError, one_plus_T


class FormError(ValueError):
    pass


def _eps(i: int) -> int:
    return -1 if i % 2 else 1


@dataclass
class EpsQuadraticForm:
    ring: Ring
    i: int
    lam: Matrix
    mu: list

    def __post_init__(self):
        self.i %= 2
        m = self.lam.nrows
        if self.lam.ncols != m or len(self.mu) != m:
            raise FormError("lambda must be square with one mu value per basis vector")
        self.mu = [x if isinstance(x, QClass) else q_reduce(self.ring, x, self.i) for x in self.mu]
        if self.lam != self.lam.star().scale(_eps(self.i)):
            raise FormError(f"lambda is not (-)^{self.i}-symmetric")
        R = self.ring
        for j, q in enumerate(self.mu):
            if q.parity != self.i:
                raise FormError(f"mu({j}) lies in the wrong Q-group")
            lift = q.rep + R.involute(q.rep) * _eps(self.i)
            if self.lam[j, j] != lift:
                raise FormError(f"lambda({j},{j}) = {self.lam[j, j]} but mu + (-)^i mubar = {lift}")

    @property
    def rank(self) -> int:
        return self.lam.nrows

    def value(self, x, y):
        R = self.ring
        tot = R.zero
        for a in range(self.rank):
            if x[a]:
                for b in range(self.rank):
                    if y[b] and self.lam[a, b]:
                        tot = tot + R.involute(x[a]) * self.lam[a, b] * y[b]
        return tot

    def mu_of(self, x) -> QClass:
        """mu on an arbitrary vector, by the extension rules."""
        R = self.ring
        tot = R.zero
        for a in range(self.rank):
            if not x[a]:
                continue
            tot = tot + x[a] * self.mu[a].rep * R.involute(x[a])
            for b in range(a + 1, self.rank):
                if x[b] and self.lam[a, b]:
                    tot = tot + R.involute(x[a]) * self.lam[a, b] * x[b]
        return q_reduce(R, tot, self.i)

    def is_nonsingular(self) -> bool:
        return is_invertible(self.lam)

    def direct_sum(self, other: "EpsQuadraticForm") -> "EpsQuadraticForm":
        if (self.ring, self.i) != (other.ring, other.i):
            raise FormError("forms over different rings or parities")
        m, k = self.rank, other.rank
        lam = Matrix.block(self.ring, [[self.lam, 0], [0, other.lam]], [m, k], [m, k])
        return EpsQuadraticForm(self.ring, self.i, lam, self.mu + other.mu)

    def transform(self, P: Matrix) -> "EpsQuadraticForm":
        """The form restricted along P (columns are the new basis)."""
        lam = P.star() @ self.lam @ P
        mu = [self.mu_of([P[a, c] for a in range(P.nrows)]) for c in range(P.ncols)]
        return EpsQuadraticForm(self.ring, self.i, lam, mu)


def hyperbolic(g: int, i: int, ring: Ring = ZZ) -> EpsQuadraticForm:
    """H_{(-)^i}(A^g) = (L + L^*, [[0, 1], [(-)^i, 0]], mu = 0 on the basis)."""
    lam = Matrix.block(ring, [[0, 1], [_eps(i), 0]], [g, g], [g, g])
    return EpsQuadraticForm(ring, i, lam, [ring.zero] * (2 * g))


def standard_lagrangian(g: int, ring: Ring = ZZ) -> Matrix:
    return Matrix.block(ring, [[1], [0]], [g, g], [g])


def dual_lagrangian(g: int, ring: Ring = ZZ) -> Matrix:
    return Matrix.block(ring, [[0], [1]], [g, g], [g])


def _is_summand(L: Matrix) -> bool:
    # a free submodule is a direct summand iff the inclusion has a left inverse
    if L.ncols == 0:
        return True
    return solve_right(L.star(), Matrix.identity(L.ring, L.ncols)) is not None


def check_lagrangian(q: EpsQuadraticForm, L: Matrix) -> Verdict:
    if not q.is_nonsingular():
        raise FormError("check_lagrangian needs a nonsingular form")
    if L.nrows != q.rank:
        return Verdict(False, "inclusion has the wrong number of rows")
    if not _is_summand(L):
        return Verdict(False, "L is not a direct summand")
    if not (L.star() @ q.lam @ L).is_zero():
        return Verdict(False, "lambda(L)(L) != 0")
    for c in range(L.ncols):
        if not q.mu_of([L[a, c] for a in range(L.nrows)]).is_zero():
            return Verdict(False, f"mu does not vanish on generator {c}")
    # L^perp = ker(L^* lam); L lies in it, so equality is containment the other way
    perp = integer_kernel_ring(L.star() @ q.lam)
    for v in perp:
        if solve_right(L, v) is None:
            return Verdict(False, "L is strictly smaller than its annihilator")
    return Verdict(True, "lagrangian")


@dataclass
class Formation:
    form: EpsQuadraticForm
    F: Matrix
    G: Matrix


def check_formation(phi: Formation) -> Report:
    rep = Report()
    for name, L in (("F", phi.F), ("G", phi.G)):
        v = check_lagrangian(phi.form, L)
        if not v.ok:
            rep.fail(f"{name}: {v.reason}")
    return rep


def _square_invertible(M: Matrix) -> bool:
    return M.nrows == M.ncols and is_invertible(M)


def is_trivial_witness(phi: Formation, H: Matrix | None = None) -> Verdict:
    """Certify triviality: F + G = K, or H a lagrangian complementary to both."""
    rep = check_formation(phi)
    if not rep.ok:
        return Verdict(False, "; ".join(rep.failures))
    R, m = phi.form.ring, phi.form.rank
    join = lambda A, B: Matrix.block(R, [[A, B]], [m], [A.ncols, B.ncols])
    if H is None:
        if _square_invertible(join(phi.F, phi.G)):
            return Verdict(True, "F and G are direct complements")
        return Verdict(False, "[F | G] is not invertible")
    v = check_lagrangian(phi.form, H)
    if not v.ok:
        return Verdict(False, "H: " + v.reason)
    for name, L in (("F", phi.F), ("G", phi.G)):
        if not _square_invertible(join(L, H)):
            return Verdict(False, f"H is not a complement of {name}")
    return Verdict(True, "H is a common lagrangian complement")


# ----------------------------------------------------------------------------
# the instant surgery obstruction


def instant_obstruction(X: StructuredComplex) -> EpsQuadraticForm:
    """The (-)^i-quadratic form of a 2i-dimensional quadratic Poincare complex over Z.

    K = coker([[d^*, 0], [(-)^{i+1}(1+T)psi_0, d]]: C^{i-1} + C_{i+2} -> C^i + C_{i+1})
    with the form induced by [[psi_0, -d], [0, 0]].
    """
    if X.kind != QUAD:
        raise FormError("instant_obstruction needs a quadratic complex")
    if not isinstance(X.ring, Integers):
        raise FormError("instant_obstruction is implemented over Z")
    if X.n % 2:
        raise FormError("instant_obstruction needs even n")
    n, C, R = X.n, X.C, X.ring
    i = n // 2
    a, b, c, e = C.rank(i - 1), C.rank(i + 2), C.rank(i), C.rank(i + 1)
    M = Matrix.block(R, [[C.d(i).star(), 0], [one_plus_T(X, i + 1).scale(_eps(i + 1)), C.d(i + 2)]],
                     [c, e], [a, b])
    Psi = Matrix.block(R, [[X.comp(0, i), C.d(i + 1).scale(-1)], [0, 0]], [c, e], [c, e])
    Lam = Psi + Psi.star().scale(_eps(i))
    if not (Lam @ M).is_zero():
        raise StructureError("the form does not vanish on the image; is the input valid?")
    snf = smith_normal_form([list(row) for row in M.data], M.ncols)
    if snf.torsion:
        raise StructureError(f"cokernel has torsion {snf.torsion}; the complex is not Poincare")
    for col in range(M.ncols):
        w = M.submatrix(range(M.nrows), [col])
        if not q_reduce(R, (w.star() @ Psi @ w)[0, 0], i).is_zero():
            raise StructureError("mu does not descend to the cokernel")
    k = snf.rank
    m = M.nrows
    # cokernel basis: images of the columns k.. of U^{-1}
    S = Matrix(R, m, m - k, [[snf.Uinv[p][t] for t in range(k, m)] for p in range(m)])
    lam = S.star() @ Lam @ S
    mu = []
    for t in range(m - k):
        col = S.submatrix(range(m), [t])
        mu.append(q_reduce(R, (col.star() @ Psi @ col)[0, 0], i))
    q = EpsQuadraticForm(R, i, lam, mu)
    if not q.is_nonsingular():
        raise StructureError("the induced form is singular; the complex is not Poincare")
    return q


def form_complex(q: EpsQuadraticForm, n: int | None = None) -> StructuredComplex:
    """The quadratic complex concentrated in degree i carrying q (n = 2i).

    psi_0 is the strict upper triangle of lambda plus the mu representatives
    on the diagonal, so that (1+T) psi_0 = lambda.
    """
    n = 2 * q.i if n is None else n
    if n % 2 or (n // 2) % 2 != q.i:
        raise FormError(f"a (-)^{q.i}-quadratic form lives in dimensions 2i with i = {q.i} mod 2")
    i, m, R = n // 2, q.rank, q.ring
    rows = [[q.mu[a].rep if a == b else (q.lam[a, b] if b > a else R.zero) for b in range(m)] for a in range(m)]
    ranks = [0] * (n + 1)
    ranks[i] = m
    return QuadraticComplex(ChainComplex(R, 0, ranks), n, {(0, i): Matrix(R, m, m, rows)})


# ----------------------------------------------------------------------------
# invariants over Z


def signature(lam) -> int:
    """Sylvester signature of a symmetric rational matrix by congruence."""
    rows = lam.data if isinstance(lam, Matrix) else lam
    A = [[Fraction(x) for x in r] for r in rows]
    if any(A[p][q] != A[q][p] for p in range(len(A)) for q in range(len(A))):
        raise FormError("signature needs a symmetric matrix")
    sig = 0
    while A:
        m = len(A)
        piv = next((p for p in range(m) if A[p][p] != 0), None)
        if piv is not None:
            pv = A[piv][piv]
            sig += 1 if pv > 0 else -1
            rest = [p for p in range(m) if p != piv]
            A = [[A[p][q] - A[p][piv] * A[piv][q] / pv for q in rest] for p in rest]
            continue
        off = next(((p, q) for p in range(m) for q in range(p + 1, m) if A[p][q] != 0), None)
        if off is None:
            break
        # zero diagonal: split off the hyperbolic block on (p, q), signature 0
        p, q = off
        a = A[p][q]
        rest = [t for t in range(m) if t not in (p, q)]
        # inverse of [[0, a], [a, 0]] is [[0, 1/a], [1/a, 0]]
        A = [[A[s][t] - (A[s][p] * A[q][t] + A[s][q] * A[p][t]) / a for t in rest] for s in rest]
    return sig


def _mod2_data(q: EpsQuadraticForm):
    if not isinstance(q.ring, Integers) or q.i != 1:
        raise FormError("arf needs a (-1)-quadratic form over Z")
    lam = [[x % 2 for x in row] for row in q.lam.data]
    mu = [int(c.rep) % 2 for c in q.mu]
    return lam, mu


def _q2(lam, mu, x) -> int:
    tot = sum(m for m, b in zip(mu, x) if b)
    for a in range(len(x)):
        if x[a]:
            for b in range(a + 1, len(x)):
                if x[b] and lam[a][b]:
                    tot += 1
    return tot % 2


def _b2(lam, x, y) -> int:
    return sum(lam[a][b] for a in range(len(x)) if x[a] for b in range(len(y)) if y[b]) % 2


def arf_mod2(lam, mu) -> int:
    """Arf invariant of a quadratic refinement of a nonsingular alternating F_2-form."""
    m = len(mu)
    if m % 2 or _rank2(lam) != m:
        raise FormError("the mod 2 form is singular")
    basis = [[int(a == b) for a in range(m)] for b in range(m)]
    arf = 0
    while basis:
        e = basis.pop(0)
        k = next(t for t, f in enumerate(basis) if _b2(lam, e, f))
        f = basis.pop(k)
        arf ^= _q2(lam, mu, e) & _q2(lam, mu, f)
        # project the rest onto the complement of span(e, f)
        basis = [[(v[a] + _b2(lam, v, f) * e[a] + _b2(lam, v, e) * f[a]) % 2 for a in range(m)] for v in basis]
    return arf


def arf_by_counting(lam, mu) -> int:
    """Arf from #{q = 0} = 2^{2g-1} + (-1)^Arf 2^{g-1}."""
    m = len(mu)
    zeros = sum(1 for x in itertools.product((0, 1), repeat=m) if _q2(lam, mu, x) == 0)
    if m == 0:
        return 0
    return 0 if zeros > 2 ** (m - 1) else 1


def _rank2(lam) -> int:
    rows = [list(r) for r in lam]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((t for t in range(r, len(rows)) if rows[t][c] % 2), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for t in range(len(rows)):
            if t != r and rows[t][c] % 2:
                rows[t] = [(x + y) % 2 for x, y in zip(rows[t], rows[r])]
        r += 1
    return r


def arf(q: EpsQuadraticForm) -> int:
    return arf_mod2(*_mod2_data(q))


@dataclass(frozen=True)
class WittClassZ:
    """Class in L_{2i}(Z): signature/8 for i even, the Arf invariant for i odd."""

    i: int
    value: int

    def __add__(self, other: "WittClassZ") -> "WittClassZ":
        if self.i != other.i:
            raise FormError("Witt classes of different parity")
        v = self.value + other.value
        return WittClassZ(self.i, v % 2 if self.i else v)


def witt_class_Z(q: EpsQuadraticForm) -> WittClassZ:
    if not isinstance(q.ring, Integers):
        raise FormError("Witt classes are computed over Z only")
    if not q.is_nonsingular():
        raise FormError("witt_class_Z needs a nonsingular form")
    if q.i == 1:
        return WittClassZ(1, arf(q))
    if any(q.lam[j, j] % 2 for j in range(q.rank)):
        raise FormError("lambda has an odd diagonal entry")
    sig = signature(q.lam)
    if sig % 8:
        raise FormError(f"signature {sig} of an even unimodular form is not divisible by 8")
    return WittClassZ(0, sig // 8)


def is_rationally_acyclic(C: ChainComplex) -> Verdict:
    if not isinstance(C.ring, Integers):
        raise FormError("is_rationally_acyclic works over Z")
    b = betti(C)
    if b:
        return Verdict(False, "rational homology in degrees " + ", ".join(map(str, sorted(b))), {"betti": b})
    return Verdict(True, "acyclic over Q")
