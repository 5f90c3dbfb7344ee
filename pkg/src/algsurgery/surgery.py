"""Algebraic surgery: effect, trace, the cobordism-to-data construction and
highly-connected data.

Block layout of the effect: C'_r = C_r + D_{r+1} + D^{n-r+1}, so that
C'^{n-r} = C^{n-r} + D^{n-r+1} + D_{r+1}.  The trace is
D'_r = C_r + D^{n-r+1} with f the inclusion of C and f' the projection
forgetting D_{r+1}.

The signs below are the ones forced by the structure relations under the
conventions of ``chains`` and ``structures`` (see the module notes in the
README).  With delta the relative structure they are

  d_C' = [[d_C, 0, (-)^{n+1} phi_0 j^*],
          [(-)^r j, d_D, (-)^{n+r+1} delta_0],
          [0, 0, (-)^r d_D^*]]

  phi'_s = [[phi_s, 0, 0],
            [(-)^{n-r+1} j T phi_{s+1}, (-)^{r+s+1} T delta_{s+1}, e_s],
            [0, e'_s, 0]]

with e'_0 = 1, e_0 = (-)^{r(n-r)} and e_s = e'_s = 0 for s >= 1, and

  psi'_0 = [[psi_0, 0, 0], [0, 0, 0], [0, 1, 0]]
  psi'_s = [[psi_s, (-)^s T psi_{s-1} j^*, 0],
            [0, (-)^{r+s+1} T delta_{s-1}, 0],
            [0, 0, 0]]                                  (s >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ChainComplex, ChainMap, Verdict, is_chain_equivalence, mapping_cone
from .rings import Matrix
from .structures import (QUAD, SYM, StructuredComplex, StructuredPair, StructureError, T, check_pair,
                         delta_one_plus_T, direct_sum_structure, one_plus_T, sgn)


class SurgeryError(StructureError):
    pass


def _require_valid(P: StructuredPair):
    rep = check_pair(P)
    if not rep.ok:
        raise SurgeryError("invalid surgery data: " + "; ".join(rep.failures[:3]))


def _ranks(P: StructuredPair, r: int) -> tuple[int, int, int]:
    n = P.n
    return P.C.rank(r), P.D.rank(r + 1), P.D.rank(n - r + 1)


def _window(P: StructuredPair) -> tuple[int, int]:
    # C'_r is nonzero only where one of C_r, D_{r+1}, D^{n-r+1} is
    n = P.n
    cands = [r for r in P.C.degrees() if P.C.rank(r)]
    cands += [r - 1 for r in P.D.degrees() if P.D.rank(r)]
    cands += [n + 1 - r for r in P.D.degrees() if P.D.rank(r)]
    if not cands:
        return P.C.lo, P.C.hi
    return min(cands + [P.C.lo]), max(cands + [P.C.hi])


def effect_complex(P: StructuredPair) -> ChainComplex:
    """The chain complex C' underlying the effect of surgery on P."""
    C, D, j, X, n = P.C, P.D, P.j, P.boundary, P.n
    quad = P.kind == QUAD
    lo, hi = _window(P)
    d = {}
    for r in range(lo + 1, hi + 1):
        a, b, c = _ranks(P, r)
        a1, b1, c1 = _ranks(P, r - 1)
        p = n - r + 1
        phi0 = one_plus_T(X, r - 1) if quad else X.comp(0, r - 1)
        dphi0 = delta_one_plus_T(P, r) if quad else P.dcomp(0, r)
        d[r] = Matrix.block(P.ring, [
            [C.d(r), 0, (phi0 @ j[p].star()).scale(sgn(n + 1))],
            [j[r].scale(sgn(r)), D.d(r + 1), dphi0.scale(sgn(n + r + 1))],
            [0, 0, D.d(p + 1).star().scale(sgn(r))],
        ], [a1, b1, c1], [a, b, c])
    return ChainComplex(P.ring, lo, [sum(_ranks(P, r)) for r in range(lo, hi + 1)], d)


def surgery_effect_sym(P: StructuredPair, validate: bool = True) -> StructuredComplex:
    if P.kind != SYM:
        raise SurgeryError("surgery_effect_sym needs symmetric data")
    if validate:
        _require_valid(P)
    j, X, n = P.j, P.boundary, P.n
    Cp = effect_complex(P)
    R = P.ring
    maps = {}
    for s in range(0, max(P.max_s(), 0) + 1):
        for r in Cp.degrees():
            p = n - r + s
            if not (Cp.lo <= p <= Cp.hi):
                continue
            a, b, c = _ranks(P, r)
            pa, pb, pc = _ranks(P, p)
            # j T phi_{s+1}: C^{p} -> C_{r+1};  T delta_{s+1}: D^{p+1} -> D_{r+1}
            jt = j[r + 1] @ T(X.comp(s + 1, p), p, r + 1)
            td = T(P.dcomp(s + 1, p + 1), p + 1, r + 1)
            row2 = [jt.scale(sgn(n - r + 1)), td.scale(sgn(r + s + 1)), 0]
            row3 = [0, 0, 0]
            if s == 0:
                row2[2] = Matrix.identity(R, b).scale(sgn(r * (n - r)))
                row3[1] = 1
            m = Matrix.block(R, [[X.comp(s, r), 0, 0], row2, row3], [a, b, c], [pa, pb, pc])
            if not m.is_zero():
                maps[(s, r)] = m
    return StructuredComplex(SYM, Cp, n, maps)


def surgery_effect_quad(P: StructuredPair, validate: bool = True) -> StructuredComplex:
    if P.kind != QUAD:
        raise SurgeryError("surgery_effect_quad needs quadratic data")
    if validate:
        _require_valid(P)
    j, X, n = P.j, P.boundary, P.n
    Cp = effect_complex(P)
    R = P.ring
    maps = {}
    for s in range(0, max(P.max_s(), 0) + 2):
        for r in Cp.degrees():
            p = n - r - s
            if not (Cp.lo <= p <= Cp.hi):
                continue
            a, b, c = _ranks(P, r)
            pa, pb, pc = _ranks(P, p)
            if s == 0:
                blocks = [[X.comp(0, r), 0, 0], [0, 0, 0], [0, 1, 0]]
            else:
                q = p + 1
                # T psi_{s-1} j^*: D^q -> C_r;  T delta_{s-1}: D^q -> D_{r+1}
                tp = T(X.comp(s - 1, q), q, r) @ j[q].star()
                td = T(P.dcomp(s - 1, q), q, r + 1)
                blocks = [[X.comp(s, r), tp.scale(sgn(s)), 0],
                          [0, td.scale(sgn(r + s + 1)), 0],
                          [0, 0, 0]]
            m = Matrix.block(R, blocks, [a, b, c], [pa, pb, pc])
            if not m.is_zero():
                maps[(s, r)] = m
    return StructuredComplex(QUAD, Cp, n, maps)


def surgery_effect(P: StructuredPair, validate: bool = True) -> StructuredComplex:
    return surgery_effect_sym(P, validate) if P.kind == SYM else surgery_effect_quad(P, validate)


@dataclass
class Cobordism(StructuredPair):
    """A pair (C + C' -> D, (delta, X + -X')) remembering both ends."""

    left: StructuredComplex | None = None
    right: StructuredComplex | None = None

    def __post_init__(self):
        super().__post_init__()
        if self.left is None or self.right is None:
            raise SurgeryError("a cobordism needs both boundary components")
        expect = direct_sum_structure(self.left, self.right.negate())
        if expect != self.boundary:
            raise SurgeryError("boundary structure is not X + -X'")

    def _split(self, first: bool) -> ChainMap:
        C, Cp, D = self.left.C, self.right.C, self.D
        comps = {}
        src = C if first else Cp
        for r in src.degrees():
            off = 0 if first else C.rank(r)
            comps[r] = self.j[r].submatrix(range(D.rank(r)), range(off, off + src.rank(r)))
        return ChainMap(src, D, comps)

    @property
    def f(self) -> ChainMap:
        return self._split(True)

    @property
    def f_prime(self) -> ChainMap:
        return self._split(False)


def make_cobordism(f: ChainMap, f_prime: ChainMap, delta: dict, left: StructuredComplex,
                   right: StructuredComplex) -> Cobordism:
    bnd = direct_sum_structure(left, right.negate())
    D = f.target
    both = ChainMap(bnd.C, D, {r: Matrix.block(D.ring, [[f[r], f_prime[r]]], [D.rank(r)],
                                               [left.C.rank(r), right.C.rank(r)]) for r in bnd.C.degrees()})
    return Cobordism(both, bnd, delta, left, right)


@dataclass
class SurgeryOutcome:
    effect: StructuredComplex
    trace: Cobordism
    f: ChainMap
    f_prime: ChainMap


def trace(P: StructuredPair, validate: bool = True) -> SurgeryOutcome:
    """The trace cobordism ((f f'): C + C' -> D', (0, X + -X'))."""
    if validate:
        _require_valid(P)
    eff = surgery_effect(P, validate=False)
    C, D, j, X, n = P.C, P.D, P.j, P.boundary, P.n
    Cp = eff.C
    quad = P.kind == QUAD
    lo, hi = min(C.lo, Cp.lo), max(C.hi, Cp.hi)
    rk = lambda r: (C.rank(r), D.rank(n - r + 1))
    d = {}
    for r in range(lo + 1, hi + 1):
        a, c = rk(r)
        a1, c1 = rk(r - 1)
        p = n - r + 1
        phi0 = one_plus_T(X, r - 1) if quad else X.comp(0, r - 1)
        d[r] = Matrix.block(P.ring, [
            [C.d(r), (phi0 @ j[p].star()).scale(sgn(n + 1))],
            [0, D.d(p + 1).star().scale(sgn(r))],
        ], [a1, c1], [a, c])
    Dp = ChainComplex(P.ring, lo, [sum(rk(r)) for r in range(lo, hi + 1)], d)
    f = ChainMap(C, Dp, {r: Matrix.block(P.ring, [[1], [0]], list(rk(r)), [C.rank(r)]) for r in C.degrees()})
    fp = {}
    for r in Cp.degrees():
        a, b, c = _ranks(P, r)
        fp[r] = Matrix.block(P.ring, [[1, 0, 0], [0, 0, 1]], [a, c], [a, b, c])
    f_prime = ChainMap(Cp, Dp, fp)
    return SurgeryOutcome(eff, make_cobordism(f, f_prime, {}, X, eff), f, f_prime)


def trace_sym(P: StructuredPair, validate: bool = True) -> SurgeryOutcome:
    if P.kind != SYM:
        raise SurgeryError("trace_sym needs symmetric data")
    return trace(P, validate)


def trace_quad(P: StructuredPair, validate: bool = True) -> SurgeryOutcome:
    if P.kind != QUAD:
        raise SurgeryError("trace_quad needs quadratic data")
    return trace(P, validate)


@dataclass
class RoundTrip:
    """Output of ``cobordism_to_data``."""

    data: StructuredPair
    outcome: SurgeryOutcome
    g: ChainMap
    h: ChainMap
    verdict: Verdict


def cobordism_to_data(G: Cobordism, certify: bool = True) -> RoundTrip:
    """Surgery data on the left end whose effect is equivalent to the right end.

    j = (f; 0): C -> C(f'), and for the relative structure on C(f')
    (delta/X')_s = [[delta_s, (-)^{n+s+1} f' X'_s], [0, e T X'_{s-+1}]]
    with e = (-)^{r+s} (symmetric, using phi'_{s-1}) or (-)^{r+s+1}
    (quadratic, using psi'_{s+1}).  g picks out the C' summand of the
    effect; h = (f, delta_0, f' X'_0) maps the new trace back to D.
    """
    if certify:
        rep = check_pair(G, poincare=True)
        if not rep.ok:
            raise SurgeryError("not a Poincare cobordism: " + "; ".join(rep.failures[:3]))
    X, Xp, n, D, R = G.left, G.right, G.n, G.D, G.ring
    C, Cp = X.C, Xp.C
    quad = G.kind == QUAD
    f, fp = G.f, G.f_prime
    cone = mapping_cone(fp)
    j = ChainMap(C, cone, {r: Matrix.block(R, [[f[r]], [0]], [D.rank(r), Cp.rank(r - 1)], [C.rank(r)])
                           for r in C.degrees()})
    delta = {}
    for s in range(0, max(G.max_s(), Xp.max_s(), 0) + 3):
        for r in cone.degrees():
            p = n - r - s if quad else n - r + s
            if not (cone.lo <= p + 1 <= cone.hi):
                continue
            b12, b22 = _glue_blocks(G, r, s, p + 1)
            m = Matrix.block(R, [[G.dcomp(s, r), b12], [0, b22]], [D.rank(r), Cp.rank(r - 1)],
                             [D.rank(p + 1), Cp.rank(p)])
            if not m.is_zero():
                delta[(s, r)] = m
    data = StructuredPair(j, X, delta)
    out = trace(data, validate=certify)
    eff = out.effect
    # effect summands: C_r + C(f')_{r+1} + C(f')^{n-r+1} = C_r + D_{r+1} + C'_r + D^{n-r+1} + C'^{n-r}
    g = {}
    for r in eff.C.degrees():
        sizes = [C.rank(r), D.rank(r + 1), Cp.rank(r), D.rank(n - r + 1), Cp.rank(n - r)]
        # quadratic case: the (1+T) in d_C' needs the correction T psi'_0 on C'^{n-r}
        corr = T(Xp.comp(0, n - r), n - r, r) if quad else 0
        g[r] = Matrix.block(R, [[0, 0, 1, 0, corr]], [Cp.rank(r)], sizes)
    g = ChainMap(eff.C, Cp, g)
    Dbar = out.trace.D
    h = {}
    for r in Dbar.degrees():
        sizes = [C.rank(r), D.rank(n - r + 1), Cp.rank(n - r)]
        x0 = one_plus_T(Xp, r) if quad else Xp.comp(0, r)
        d0 = delta_one_plus_T(G, r) if quad else G.dcomp(0, r)
        h[r] = Matrix.block(R, [[f[r], d0, fp[r] @ x0]],
                            [D.rank(r)], sizes)
    h = ChainMap(Dbar, D, h, check=False)
    verdict = is_chain_equivalence(g) if certify else Verdict(True, "not certified")
    return RoundTrip(data, out, g, h, verdict)


def _glue_blocks(G: Cobordism, r: int, s: int, p: int):
    """The C'-blocks shared by gluing and by the data of the round trip.

    Returns (f' X'_s, T X'_{s-+1}) as maps into D_r and C'_{r-1}, both from
    C'^{p-1}, where p is the source degree in D^{n+1-*}.
    """
    Xp, n = G.right, G.n
    fp = G.f_prime
    q = p - 1
    b12 = (fp[r] @ Xp.comp(s, r)).scale(sgn(n + s + 1))
    if G.kind == QUAD:
        b22 = T(Xp.comp(s + 1, q), q, r - 1).scale(sgn(r + s + 1))
    elif s >= 1:
        b22 = T(Xp.comp(s - 1, q), q, r - 1).scale(sgn(r + s))
    else:
        b22 = Matrix.zeros(G.ring, Xp.C.rank(r - 1), Xp.C.rank(q))
    return b12, b22


def glue(G1: Cobordism, G2: Cobordism) -> Cobordism:
    """Union of adjoining cobordisms X ~ X' and X' ~ X'' along X'.

    D'' = D + C'[-1] + D' with d = [[d_D, (-)^r f', 0], [0, d_C', 0],
    [0, (-)^r g, d_D']], g the inclusion of C' in D', and
    delta''_s = [[delta_s, (-)^{n+s+1} f' X'_s, 0],
                 [0, e T X'_{s-+1}, (-)^{r+1} X'_s g^*],
                 [0, 0, delta'_s]].
    """
    if (G1.kind, G1.n) != (G2.kind, G2.n):
        raise SurgeryError("cobordisms of different kind or dimension")
    if G1.right != G2.left:
        raise SurgeryError("the cobordisms do not share the middle end")
    n, R = G1.n, G1.ring
    D, Dp, Xm = G1.D, G2.D, G1.right
    Cm = Xm.C
    fp, g = G1.f_prime, G2.f
    quad = G1.kind == QUAD
    lo = min(D.lo, Cm.lo + 1, Dp.lo)
    hi = max(D.hi, Cm.hi + 1, Dp.hi)
    rk = lambda r: [D.rank(r), Cm.rank(r - 1), Dp.rank(r)]
    d = {}
    for r in range(lo + 1, hi + 1):
        d[r] = Matrix.block(R, [[D.d(r), fp[r - 1].scale(sgn(r)), 0],
                                [0, Cm.d(r - 1), 0],
                                [0, g[r - 1].scale(sgn(r)), Dp.d(r)]], rk(r - 1), rk(r))
    Dpp = ChainComplex(R, lo, [sum(rk(r)) for r in range(lo, hi + 1)], d)
    C, Cpp = G1.left.C, G2.right.C
    f = ChainMap(C, Dpp, {r: Matrix.block(R, [[G1.f[r]], [0], [0]], rk(r), [C.rank(r)]) for r in C.degrees()})
    fpp = ChainMap(Cpp, Dpp, {r: Matrix.block(R, [[0], [0], [G2.f_prime[r]]], rk(r), [Cpp.rank(r)])
                              for r in Cpp.degrees()})
    delta = {}
    top = max(G1.max_s(), G2.max_s(), 0) + 3
    for s in range(0, top + 1):
        for r in Dpp.degrees():
            p = n + 1 - r - s if quad else n + 1 - r + s
            if not (Dpp.lo <= p <= Dpp.hi):
                continue
            b12, b22 = _glue_blocks(G1, r, s, p)
            b23 = (Xm.comp(s, r - 1) @ g[p].star()).scale(sgn(r + 1))
            m = Matrix.block(R, [[G1.dcomp(s, r), b12, 0], [0, b22, b23], [0, 0, G2.dcomp(s, r)]],
                             rk(r), rk(p))
            if not m.is_zero():
                delta[(s, r)] = m
    return make_cobordism(f, fpp, delta, G1.left, G2.right)


def highly_connected_data(X: StructuredComplex) -> StructuredPair:
    """Data (j: C -> D, (0, psi)) with D the quotient D_r = C_r for r > n - i."""
    if X.kind != QUAD:
        raise SurgeryError("highly_connected_data needs a quadratic complex")
    n, C, R = X.n, X.C, X.ring
    i = n // 2
    cut = n - i
    ranks = [C.rank(r) if r > cut else 0 for r in C.degrees()]
    d = {r: C.d(r) for r in range(C.lo + 1, C.hi + 1) if r - 1 > cut}
    D = ChainComplex(R, C.lo, ranks, d)
    j = ChainMap(C, D, {r: Matrix.identity(R, C.rank(r)) if r > cut else Matrix.zeros(R, 0, C.rank(r))
                        for r in C.degrees()})
    return StructuredPair(j, X, {})
