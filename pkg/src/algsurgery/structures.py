"""Symmetric and quadratic structures on chain complexes and pairs.

A symmetric structure of formal dimension n is a family
phi_s: C^{n-r+s} -> C_r (s >= 0); a quadratic one is psi_s: C^{n-r-s} -> C_r.
Components are stored sparsely under the key (s, r).  A morphism
C^p -> C_q is a (rank C_q) x (rank C_p) matrix; T sends it to
(-1)^{pq} times its conjugate transpose, a morphism C^q -> C_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .chains import (ChainComplex, ChainError, ChainMap, Report, Verdict, dual_complex, is_chain_equivalence,
                     mapping_cone)
from .rings import Matrix

SYM = "sym"
QUAD = "quad"


def sgn(e: int) -> int:
    return -1 if e % 2 else 1


def T(m: Matrix, p: int, q: int) -> Matrix:
    """T: Hom(C^p, C_q) -> Hom(C^q, C_p), phi -> (-)^{pq} phi^*."""
    return m.star().scale(sgn(p * q))


class StructureError(ChainError):
    pass


@dataclass
class StructuredComplex:
    """(C, phi) symmetric or (C, psi) quadratic of formal dimension n."""

    kind: str
    C: ChainComplex
    n: int
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (SYM, QUAD):
            raise StructureError(f"unknown structure kind {self.kind!r}")
        clean = {}
        for (s, r), m in self.maps.items():
            s, r = int(s), int(r)
            if s < 0:
                raise StructureError(f"negative structure index s={s}")
            if s > self.support_bound() and not m.is_zero():
                raise StructureError(f"component s={s} exceeds the support bound {self.support_bound()}")
            exp = (self.C.rank(r), self.C.rank(self.src_degree(s, r)))
            if (m.nrows, m.ncols) != exp:
                raise StructureError(f"component (s={s}, r={r}) has shape {m.nrows}x{m.ncols}, expected {exp}")
            if not m.is_zero():
                clean[(s, r)] = m
        self.maps = clean

    @property
    def ring(self):
        return self.C.ring

    def support_bound(self) -> int:
        """Largest s for which a component can be nonzero (n+1 on the window [0, n])."""
        lo, hi = self.C.lo, self.C.hi
        b = 2 * hi - self.n if self.kind == SYM else self.n - 2 * lo
        return max(self.n + 1, b)

    def src_degree(self, s: int, r: int) -> int:
        """Degree p of the dual module C^p that the (s, r) component starts from."""
        return self.n - r + s if self.kind == SYM else self.n - r - s

    def comp(self, s: int, r: int) -> Matrix:
        m = self.maps.get((s, r))
        if m is None:
            if s < 0:
                return Matrix.zeros(self.ring, self.C.rank(r), self.C.rank(self.src_degree(0, r)))
            return Matrix.zeros(self.ring, self.C.rank(r), self.C.rank(self.src_degree(s, r)))
        return m

    def max_s(self) -> int:
        return max((s for s, _ in self.maps), default=-1)

    def phi0_map(self) -> ChainMap:
        """phi_0 (symmetric) or (1+T)psi_0 (quadratic) as a map C^{n-*} -> C."""
        dual = dual_complex(self.C, self.n)
        if self.kind == SYM:
            comps = {r: self.comp(0, r) for r in self.C.degrees()}
        else:
            comps = {r: one_plus_T(self, r) for r in self.C.degrees()}
        return ChainMap(dual, self.C, comps, check=False)

    def negate(self) -> "StructuredComplex":
        return StructuredComplex(self.kind, self.C, self.n, {k: -m for k, m in self.maps.items()})

    def __eq__(self, other):
        if not isinstance(other, StructuredComplex):
            return NotImplemented
        return (self.kind, self.n) == (other.kind, other.n) and self.C == other.C and self.maps == other.maps


def SymmetricComplex(C: ChainComplex, n: int, maps: Mapping | None = None) -> StructuredComplex:
    return StructuredComplex(SYM, C, n, dict(maps or {}))


def QuadraticComplex(C: ChainComplex, n: int, maps: Mapping | None = None) -> StructuredComplex:
    return StructuredComplex(QUAD, C, n, dict(maps or {}))


def one_plus_T(X: StructuredComplex, r: int) -> Matrix:
    """((1+T)psi_0) at degree r: C^{n-r} -> C_r."""
    n = X.n
    return X.comp(0, r) + T(X.comp(0, n - r), r, n - r)


# ----------------------------------------------------------------------------
# relation residuals


def sym_residual(C: ChainComplex, n: int, comp, s: int, r: int) -> Matrix:
    """d phi_s + (-1)^r phi_s d^* + (-1)^{n+s-1}(phi_{s-1} + (-1)^s T phi_{s-1}).

    A map C^{n-r+s-1} -> C_r; ``comp(s, r)`` returns phi_s at degree r.
    """
    p = n - r + s - 1
    out = C.d(r + 1) @ comp(s, r + 1) + (comp(s, r) @ C.d(p + 1).star()).scale(sgn(r))
    if s >= 1:
        q = p  # phi_{s-1} at degree q maps C^r -> C_q
        tail = comp(s - 1, r) + T(comp(s - 1, q), r, q).scale(sgn(s))
        out = out + tail.scale(sgn(n + s - 1))
    return out


def quad_residual(C: ChainComplex, n: int, comp, s: int, r: int) -> Matrix:
    """d psi_s + (-1)^r psi_s d^* + (-1)^{n-s-1}(psi_{s+1} + (-1)^{s+1} T psi_{s+1})."""
    p = n - r - s - 1
    out = C.d(r + 1) @ comp(s, r + 1) + (comp(s, r) @ C.d(p + 1).star()).scale(sgn(r))
    q = p
    tail = comp(s + 1, r) + T(comp(s + 1, q), r, q).scale(sgn(s + 1))
    return out + tail.scale(sgn(n - s - 1))


def check_symmetric(X: StructuredComplex) -> Report:
    """Verify every instance of the symmetric structure relation."""
    if X.kind != SYM:
        raise StructureError("check_symmetric needs a symmetric structure")
    rep = Report()
    C = X.C
    for s in range(0, max(X.max_s(), 0) + 2):
        for r in range(C.lo - 1, C.hi + 1):
            res = sym_residual(C, X.n, X.comp, s, r)
            if not res.is_zero():
                what = "phi_0 is not a chain map" if s == 0 else (
                    "phi_1 is not a homotopy phi_0 ~ T phi_0" if s == 1 else "higher relation fails")
                rep.fail(f"s={s}, r={r}: {what} (entries {res.nonzero_entries()})")
    return rep


def check_quadratic(X: StructuredComplex) -> Report:
    if X.kind != QUAD:
        raise StructureError("check_quadratic needs a quadratic structure")
    rep = Report()
    C = X.C
    for s in range(0, max(X.max_s(), 0) + 1):
        for r in range(C.lo - 1, C.hi + 1):
            res = quad_residual(C, X.n, X.comp, s, r)
            if not res.is_zero():
                rep.fail(f"s={s}, r={r}: quadratic relation fails (entries {res.nonzero_entries()})")
    return rep


def check_structure(X: StructuredComplex) -> Report:
    return check_symmetric(X) if X.kind == SYM else check_quadratic(X)


def symmetrize(X: StructuredComplex) -> StructuredComplex:
    """(C, psi) -> (C, phi) with phi_0 = (1+T)psi_0 and phi_s = 0 for s >= 1."""
    if X.kind != QUAD:
        raise StructureError("symmetrize needs a quadratic structure")
    return SymmetricComplex(X.C, X.n, {(0, r): one_plus_T(X, r) for r in X.C.degrees()})


def is_poincare(X: StructuredComplex) -> Verdict:
    return is_chain_equivalence(X.phi0_map())


def transport(X: StructuredComplex, f: ChainMap) -> StructuredComplex:
    """Push the structure along f: C -> C' by phi_s -> f phi_s f^* componentwise."""
    Cn = f.target
    maps = {}
    for (s, r), m in X.maps.items():
        p = X.src_degree(s, r)
        maps[(s, r)] = f[r] @ m @ f[p].star()
    return StructuredComplex(X.kind, Cn, X.n, maps)


def skew_suspension(X: StructuredComplex, k: int = 1) -> StructuredComplex:
    """(C_{*-2k}, phi) in dimension n + 4k: the relabelling behind 4-periodicity.

    Every sign in the relations depends on degrees mod 2 and on n mod 2, and
    T(phi) changes by (-1)^{2k(p+q)+4k^2} = 1, so no component changes.
    """
    maps = {(s, r + 2 * k): m for (s, r), m in X.maps.items()}
    return StructuredComplex(X.kind, X.C.shift(2 * k), X.n + 4 * k, maps)


def direct_sum_structure(X: StructuredComplex, Y: StructuredComplex) -> StructuredComplex:
    from .chains import block_diag, direct_sum

    if (X.kind, X.n) != (Y.kind, Y.n):
        raise StructureError("direct sum needs structures of the same kind and dimension")
    C = direct_sum(X.C, Y.C)
    maps = {}
    for s in range(0, max(X.max_s(), Y.max_s()) + 1):
        for r in C.degrees():
            m = block_diag([X.comp(s, r), Y.comp(s, r)], C.ring)
            if not m.is_zero():
                maps[(s, r)] = m
    return StructuredComplex(X.kind, C, X.n, maps)


# ----------------------------------------------------------------------------
# pairs


@dataclass
class StructuredPair:
    """(j: C -> D, (delta, X)) with X the boundary structure on C.

    ``delta[(s, r)]`` is delta phi_s: D^{n+1-r+s} -> D_r (symmetric) or
    delta psi_s: D^{n+1-r-s} -> D_r (quadratic), n = X.n.
    """

    j: ChainMap
    boundary: StructuredComplex
    delta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.j.source is not self.boundary.C and not (self.j.source == self.boundary.C):
            raise StructureError("j must start at the boundary complex")
        clean = {}
        for (s, r), m in self.delta.items():
            s, r = int(s), int(r)
            exp = (self.D.rank(r), self.D.rank(self.src_degree(s, r)))
            if (m.nrows, m.ncols) != exp:
                raise StructureError(f"delta component (s={s}, r={r}) has shape "
                                     f"{m.nrows}x{m.ncols}, expected {exp}")
            if not m.is_zero():
                clean[(s, r)] = m
        self.delta = clean

    @property
    def kind(self):
        return self.boundary.kind

    @property
    def n(self):
        return self.boundary.n

    @property
    def C(self):
        return self.boundary.C

    @property
    def D(self):
        return self.j.target

    @property
    def ring(self):
        return self.C.ring

    def src_degree(self, s, r):
        return self.n + 1 - r + s if self.kind == SYM else self.n + 1 - r - s

    def dcomp(self, s: int, r: int) -> Matrix:
        m = self.delta.get((s, r))
        if m is None:
            return Matrix.zeros(self.ring, self.D.rank(r), self.D.rank(self.src_degree(max(s, 0), r)))
        return m

    def max_s(self):
        return max([s for s, _ in self.delta] + [self.boundary.max_s()], default=-1)


def pair_residual(P: StructuredPair, s: int, r: int) -> Matrix:
    """Right side minus left side of the pair relation at (s, r)."""
    n, D, j = P.n, P.D, P.j
    X = P.boundary
    if P.kind == SYM:
        p = n - r + s  # source D^{n-r+s}
        lhs = j[r] @ X.comp(s, r) @ j[p].star()
        rhs = D.d(r + 1) @ P.dcomp(s, r + 1) + (P.dcomp(s, r) @ D.d(p + 1).star()).scale(sgn(r))
        if s >= 1:
            tail = P.dcomp(s - 1, r) + T(P.dcomp(s - 1, p), r, p).scale(sgn(s))
            rhs = rhs + tail.scale(sgn(n + s))
    else:
        p = n - r - s
        lhs = j[r] @ X.comp(s, r) @ j[p].star()
        rhs = D.d(r + 1) @ P.dcomp(s, r + 1) + (P.dcomp(s, r) @ D.d(p + 1).star()).scale(sgn(r))
        tail = P.dcomp(s + 1, r) + T(P.dcomp(s + 1, p), r, p).scale(sgn(s + 1))
        rhs = rhs + tail.scale(sgn(n - s))
    return rhs - lhs


def delta_one_plus_T(P: StructuredPair, r: int) -> Matrix:
    """((1+T) delta psi_0) at degree r: D^{n+1-r} -> D_r."""
    p = P.n + 1 - r
    return P.dcomp(0, r) + T(P.dcomp(0, p), r, p)


def pair_duality_map(P: StructuredPair) -> ChainMap:
    """The map D^{n+1-*} -> C(j) whose equivalence makes P a Poincare pair.

    Degree r component is (delta phi_0 ; (-1)^{r+1} phi_0 j^*), with
    (1+T)-symmetrized blocks in the quadratic case.  The sign on the lower
    block is what makes the column a chain map into our cone.
    """
    n, C, D, j = P.n, P.C, P.D, P.j
    X = P.boundary
    dual = dual_complex(D, n + 1)
    cone = mapping_cone(j)
    comps = {}
    for r in range(cone.lo, cone.hi + 1):
        p = n + 1 - r
        if P.kind == SYM:
            top = P.dcomp(0, r)
            low = X.comp(0, r - 1)
        else:
            top = delta_one_plus_T(P, r)
            low = one_plus_T(X, r - 1)
        low = (low @ j[p].star()).scale(sgn(r + 1))
        comps[r] = Matrix.block(P.ring, [[top], [low]], [D.rank(r), C.rank(r - 1)], [D.rank(p)])
    return ChainMap(dual, cone, comps, check=False)


def check_pair(P: StructuredPair, poincare: bool = False) -> Report:
    """Check the pair relations and, if asked, the Poincare condition."""
    from .chains import check_chain_map

    rep = Report()
    rep.merge(check_structure(P.boundary), "boundary: ")
    lo, hi = min(P.D.lo, P.C.lo), max(P.D.hi, P.C.hi)
    top = max(P.max_s(), 0) + 2
    for s in range(0, top + 1):
        for r in range(lo - 1, hi + 2):
            res = pair_residual(P, s, r)
            if not res.is_zero():
                rep.fail(f"s={s}, r={r}: pair relation fails (entries {res.nonzero_entries()})")
    if poincare and rep.ok:
        f = pair_duality_map(P)
        cm = check_chain_map(f)
        if not cm.ok:
            rep.merge(cm, "duality map: ")
        else:
            v = is_chain_equivalence(f)
            if not v.ok:
                rep.fail(f"not Poincare: {v.reason}")
    return rep
