"""Bounded chain complexes of f.g. free modules, chain maps, duals and cones.

Sign conventions used throughout the package:

* the dual complex C^{n-*} has (C^{n-*})_r = C^{n-r} with differential
  (-1)^r d_C^* : C^{n-r} -> C^{n-r+1};
* the mapping cone of f: C -> D has C(f)_r = D_r + C_{r-1} and differential
  [[d_D, (-1)^r f], [0, d_C]], where r is the degree of the cone element the
  differential is applied to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .linalg import rank as ring_rank
from .linalg import restrict_matrix, solve_right
from .rings import ZZ, CyclicGroupRing, Integers, Matrix, Rationals, Ring
from .smith import smith_normal_form


class ChainError(ValueError):
    pass


@dataclass
class Report:
    """Outcome of a validation: ``ok`` plus human-readable failures."""

    ok: bool = True
    failures: list[str] = field(default_factory=list)

    def fail(self, msg: str):
        self.ok = False
        self.failures.append(msg)

    def merge(self, other: "Report", prefix: str = ""):
        for f in other.failures:
            self.fail(prefix + f)
        return self

    def __bool__(self):
        return self.ok


class ChainComplex:
    """A chain complex C_hi -> ... -> C_lo of f.g. free modules.

    ``d[r]`` is the matrix of d: C_r -> C_{r-1}; missing entries are zero.
    With ``check=True`` (the default) shapes and d^2 = 0 are enforced.
    """

    def __init__(self, ring: Ring, lo: int, ranks, d: Mapping[int, Matrix] | None = None, check: bool = True):
        self.ring = ring
        self.lo = lo
        self.ranks = tuple(int(x) for x in ranks)
        if any(x < 0 for x in self.ranks):
            raise ChainError("negative rank")
        self._d = {}
        for r, m in (d or {}).items():
            if m is None:
                continue
            if m.ring != ring:
                raise ChainError(f"d_{r} is over {m.ring}, complex is over {ring}")
            self._d[int(r)] = m
        if check:
            rep = validate_complex(self)
            if not rep.ok:
                raise ChainError("; ".join(rep.failures))

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, r: int) -> int:
        if self.lo <= r <= self.hi:
            return self.ranks[r - self.lo]
        return 0

    def d(self, r: int) -> Matrix:
        m = self._d.get(r)
        if m is None:
            return Matrix.zeros(self.ring, self.rank(r - 1), self.rank(r))
        return m

    def total_rank(self) -> int:
        return sum(self.ranks)

    def is_zero(self) -> bool:
        return self.total_rank() == 0

    def support(self) -> list[int]:
        return [r for r in self.degrees() if self.rank(r)]

    def __eq__(self, other):
        if not isinstance(other, ChainComplex) or self.ring != other.ring:
            return NotImplemented
        degs = set(self.degrees()) | set(other.degrees())
        return all(self.rank(r) == other.rank(r) for r in degs) and all(
            self.d(r) == other.d(r) for r in degs)

    def __repr__(self):
        return f"ChainComplex({self.ring}, lo={self.lo}, ranks={list(self.ranks)})"

    def window(self, lo: int, hi: int) -> "ChainComplex":
        """The same complex re-expressed on the degree window [lo, hi]."""
        if any(self.rank(r) for r in self.degrees() if not lo <= r <= hi):
            raise ChainError(f"complex has modules outside [{lo}, {hi}]")
        ranks = [self.rank(r) for r in range(lo, hi + 1)]
        d = {r: self.d(r) for r in range(lo + 1, hi + 1)}
        return ChainComplex(self.ring, lo, ranks, d, check=False)

    def shift(self, k: int) -> "ChainComplex":
        """C_{*-k}: the module in degree r is C_{r-k}; differentials unchanged."""
        return ChainComplex(self.ring, self.lo + k, self.ranks,
                            {r + k: m for r, m in self._d.items()}, check=False)


def zero_complex(ring: Ring, lo: int = 0, hi: int = -1) -> ChainComplex:
    return ChainComplex(ring, lo, [0] * max(0, hi - lo + 1))


def sphere_complex(ring: Ring, i: int, rank: int = 1) -> ChainComplex:
    """S^i A: a free module of the given rank concentrated in degree i."""
    return ChainComplex(ring, i, [rank])


def validate_complex(C: ChainComplex) -> Report:
    rep = Report()
    for r, m in C._d.items():
        if not C.lo < r <= C.hi and not m.is_zero():
            rep.fail(f"degree {r}: nonzero differential outside the window [{C.lo}, {C.hi}]")
        elif (m.nrows, m.ncols) != (C.rank(r - 1), C.rank(r)):
            rep.fail(f"degree {r}: d has shape {m.nrows}x{m.ncols}, expected {C.rank(r - 1)}x{C.rank(r)}")
    if not rep.ok:
        return rep
    for r in range(C.lo + 2, C.hi + 1):
        dd = C.d(r - 1) @ C.d(r)
        if not dd.is_zero():
            rep.fail(f"degree {r}: d_{r - 1} d_{r} != 0 (entries {dd.nonzero_entries()})")
    return rep


def direct_sum(*complexes: ChainComplex) -> ChainComplex:
    ring = complexes[0].ring
    lo = min(C.lo for C in complexes)
    hi = max(C.hi for C in complexes)
    ranks = [sum(C.rank(r) for C in complexes) for r in range(lo, hi + 1)]
    d = {}
    for r in range(lo + 1, hi + 1):
        d[r] = block_diag([C.d(r) for C in complexes], ring)
    return ChainComplex(ring, lo, ranks, d, check=False)


def block_diag(mats, ring):
    rs = [m.nrows for m in mats]
    cs = [m.ncols for m in mats]
    blocks = [[mats[i] if i == j else 0 for j in range(len(mats))] for i in range(len(mats))]
    return Matrix.block(ring, blocks, rs, cs)


# ----------------------------------------------------------------------------
# chain maps


class ChainMap:
    """Degree-preserving morphism f: C -> D, ``maps[r]: C_r -> D_r``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        self._f = {}
        for r, m in (maps or {}).items():
            if m is None:
                continue
            if (m.nrows, m.ncols) != (target.rank(r), source.rank(r)):
                raise ChainError(f"f_{r} has shape {m.nrows}x{m.ncols}, "
                                 f"expected {target.rank(r)}x{source.rank(r)}")
            self._f[int(r)] = m
        if check:
            rep = check_chain_map(self)
            if not rep.ok:
                raise ChainError("; ".join(rep.failures))

    @property
    def ring(self):
        return self.source.ring

    def degrees(self):
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def __getitem__(self, r: int) -> Matrix:
        m = self._f.get(r)
        if m is None:
            return Matrix.zeros(self.source.ring, self.target.rank(r), self.source.rank(r))
        return m

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        degs = set(other.degrees()) | set(self.degrees())
        return ChainMap(other.source, self.target, {r: self[r] @ other[r] for r in degs}, check=False)

    def __add__(self, other):
        return ChainMap(self.source, self.target, {r: self[r] + other[r] for r in self.degrees()}, check=False)

    def __sub__(self, other):
        return ChainMap(self.source, self.target, {r: self[r] - other[r] for r in self.degrees()}, check=False)

    def __neg__(self):
        return ChainMap(self.source, self.target, {r: -self[r] for r in self.degrees()}, check=False)

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {r: Matrix.identity(C.ring, C.rank(r)) for r in C.degrees()}, check=False)


def zero_map(C: ChainComplex, D: ChainComplex) -> ChainMap:
    return ChainMap(C, D, {}, check=False)


def check_chain_map(f: ChainMap) -> Report:
    rep = Report()
    C, D = f.source, f.target
    for r in range(min(C.lo, D.lo), max(C.hi, D.hi) + 2):
        lhs = D.d(r) @ f[r]
        rhs = f[r - 1] @ C.d(r)
        if lhs != rhs:
            rep.fail(f"degree {r}: d f != f d")
    return rep


@dataclass
class ChainHomotopy:
    """h_r: C_r -> D_{r+1} with d h + h d = f - g."""

    f: ChainMap
    g: ChainMap
    h: dict[int, Matrix]

    def component(self, r: int) -> Matrix:
        m = self.h.get(r)
        if m is None:
            return Matrix.zeros(self.f.ring, self.f.target.rank(r + 1), self.f.source.rank(r))
        return m

    def check(self) -> Report:
        rep = Report()
        C, D = self.f.source, self.f.target
        for r in range(min(C.lo, D.lo) - 1, max(C.hi, D.hi) + 2):
            lhs = D.d(r + 1) @ self.component(r) + self.component(r - 1) @ C.d(r)
            if lhs != self.f[r] - self.g[r]:
                rep.fail(f"degree {r}: dh + hd != f - g")
        return rep


# ----------------------------------------------------------------------------
# duality and cones


def dual_complex(C: ChainComplex, n: int) -> ChainComplex:
    """C^{n-*}: degree r holds C^{n-r}, differential (-1)^r d_C^*."""
    lo, hi = n - C.hi, n - C.lo
    ranks = [C.rank(n - r) for r in range(lo, hi + 1)]
    d = {}
    for r in range(lo + 1, hi + 1):
        d[r] = C.d(n - r + 1).star().scale((-1) ** (r % 2))
    return ChainComplex(C.ring, lo, ranks, d, check=False)


def dual_map(f: ChainMap, n: int) -> ChainMap:
    """f^*: D^{n-*} -> C^{n-*} for f: C -> D."""
    src = dual_complex(f.target, n)
    tgt = dual_complex(f.source, n)
    return ChainMap(src, tgt, {r: f[n - r].star() for r in range(tgt.lo, tgt.hi + 1)}, check=False)


def double_dual_iso(C: ChainComplex, n: int) -> ChainMap:
    """The chain isomorphism C -> (C^{n-*})^{n-*}.

    With the (-1)^r d^* rule the double dual has differential (-1)^{n+1} d,
    so for even n the identification carries the signs (-1)^r.
    """
    CC = dual_complex(dual_complex(C, n), n)
    sign = (lambda r: 1) if n % 2 else (lambda r: (-1) ** (r % 2))
    return ChainMap(C, CC, {r: Matrix.identity(C.ring, C.rank(r)).scale(sign(r)) for r in C.degrees()})


def mapping_cone(f: ChainMap) -> ChainComplex:
    C, D = f.source, f.target
    if C.is_zero() and D.is_zero():
        return zero_complex(C.ring, min(D.lo, C.lo + 1), max(D.hi, C.hi + 1))
    lo = min(D.lo, C.lo + 1)
    hi = max(D.hi, C.hi + 1)
    ranks = [D.rank(r) + C.rank(r - 1) for r in range(lo, hi + 1)]
    d = {}
    for r in range(lo + 1, hi + 1):
        d[r] = Matrix.block(C.ring,
                            [[D.d(r), f[r - 1].scale((-1) ** (r % 2))],
                             [0, C.d(r - 1)]],
                            [D.rank(r - 1), C.rank(r - 2)], [D.rank(r), C.rank(r - 1)])
    return ChainComplex(C.ring, lo, ranks, d, check=False)


# ----------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def homology(C: ChainComplex) -> list[HomologyGroup]:
    """H_r = ker d_r / im d_{r+1} for every degree of the window (Z or Q)."""
    if isinstance(C.ring, CyclicGroupRing):
        raise ChainError("homology over Z[Z/k] is not provided; use restrict_scalars first")
    out = []
    if isinstance(C.ring, Rationals):
        ranks = {r: ring_rank(C.d(r)) for r in range(C.lo, C.hi + 2)}
        for r in C.degrees():
            out.append(HomologyGroup(r, C.rank(r) - ranks[r] - ranks[r + 1]))
        return out
    snfs = {}
    for r in range(C.lo, C.hi + 2):
        m = C.d(r)
        snfs[r] = smith_normal_form([list(row) for row in m.data], m.ncols)
    for r in C.degrees():
        free = C.rank(r) - snfs[r].rank - snfs[r + 1].rank
        out.append(HomologyGroup(r, free, tuple(snfs[r + 1].torsion)))
    return out


def homology_dict(C: ChainComplex) -> dict[int, HomologyGroup]:
    return {h.degree: h for h in homology(C) if not h.is_zero()}


def betti(C: ChainComplex) -> dict[int, int]:
    return {h.degree: h.rank for h in homology(C) if h.rank}


def restrict_scalars(C: ChainComplex) -> ChainComplex:
    """The underlying Z-complex of a complex over Z[Z/k]."""
    if not isinstance(C.ring, CyclicGroupRing):
        raise ChainError("restrict_scalars needs a complex over Z[Z/k]")
    k = C.ring.k
    d = {r: Matrix(ZZ, C.rank(r - 1) * k, C.rank(r) * k, restrict_matrix(C.d(r)))
         for r in range(C.lo + 1, C.hi + 1)}
    return ChainComplex(ZZ, C.lo, [x * k for x in C.ranks], d, check=False)


def restrict_map(f: ChainMap) -> ChainMap:
    k = f.ring.k
    S, T = restrict_scalars(f.source), restrict_scalars(f.target)
    return ChainMap(S, T, {r: Matrix(ZZ, f.target.rank(r) * k, f.source.rank(r) * k, restrict_matrix(f[r]))
                           for r in f.degrees()}, check=False)


def is_acyclic(C: ChainComplex) -> bool:
    if isinstance(C.ring, CyclicGroupRing):
        C = restrict_scalars(C)
    return all(h.is_zero() for h in homology(C))


# ----------------------------------------------------------------------------
# contractions and chain equivalences


def find_contraction(C: ChainComplex) -> dict[int, Matrix] | None:
    """A chain contraction h (d h + h d = 1) of C, or None if C is not contractible.

    Built degree by degree from the bottom: with h_{r-1} fixed, 1 - h_{r-1} d
    lands in the cycles, and on a free module it lifts along d whenever the
    complex is exact, so failure at any degree means C is not contractible.
    Over Z[Z/k] each lift is solved equivariantly by restriction of scalars.
    """
    ring = C.ring
    h: dict[int, Matrix] = {}
    prev = Matrix.zeros(ring, C.rank(C.lo), C.rank(C.lo - 1))
    for r in C.degrees():
        e = Matrix.identity(ring, C.rank(r)) - prev @ C.d(r)
        if C.rank(r) == 0:
            hr = Matrix.zeros(ring, C.rank(r + 1), 0)
        else:
            hr = solve_right(C.d(r + 1), e)
            if hr is None:
                return None
        h[r] = hr
        prev = hr
    return h


def check_contraction(C: ChainComplex, h: Mapping[int, Matrix]) -> bool:
    def comp(r):
        m = h.get(r)
        return m if m is not None else Matrix.zeros(C.ring, C.rank(r + 1), C.rank(r))

    return all(C.d(r + 1) @ comp(r) + comp(r - 1) @ C.d(r) == Matrix.identity(C.ring, C.rank(r))
               for r in C.degrees())


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    certificate: dict | None = None

    def __bool__(self):
        return self.ok


def is_chain_equivalence(f: ChainMap) -> Verdict:
    """Decide whether f is a chain equivalence.

    Over Z and Q this is acyclicity of the mapping cone, read off from its
    homology.  Over Z[Z/k] the cone must admit an equivariant contraction,
    which is returned as the certificate.
    """
    cone = mapping_cone(f)
    ring = f.ring
    if isinstance(ring, (Integers, Rationals)):
        bad = [h for h in homology(cone) if not h.is_zero()]
        if bad:
            return Verdict(False, "cone homology " + ", ".join(f"H_{h.degree}={h}" for h in bad))
        cert = find_contraction(cone) if isinstance(ring, Integers) else None
        return Verdict(True, "cone acyclic", {"contraction": cert} if cert is not None else None)
    h = find_contraction(cone)
    if h is None:
        return Verdict(False, "mapping cone admits no equivariant contraction")
    assert check_contraction(cone, h)
    return Verdict(True, "equivariant contraction of the cone", {"contraction": h})


# ----------------------------------------------------------------------------
# Gaussian elimination of unit entries


@dataclass
class Reduction:
    """C_red with chain equivalences proj: C -> C_red, incl: C_red -> C.

    proj o incl = 1 exactly and incl o proj is homotopic to 1 via ``homotopy``.
    """

    complex: ChainComplex
    proj: ChainMap
    incl: ChainMap
    homotopy: dict[int, Matrix]


def _find_unit(C: ChainComplex):
    ring = C.ring
    for r in range(C.lo + 1, C.hi + 1):
        m = C.d(r)
        for p, row in enumerate(m.data):
            for q, a in enumerate(row):
                if a and ring.is_unit(a):
                    return r, p, q
    return None


def _eliminate(C: ChainComplex, r: int, p: int, q: int):
    """Cancel the unit entry u = d_r[p][q]; returns (C', proj, incl, h)."""
    ring = C.ring
    d = C.d(r)
    u = d[p, q]
    uinv = ring.inverse(u)
    keep_r = [x for x in range(C.rank(r)) if x != q]
    keep_r1 = [x for x in range(C.rank(r - 1)) if x != p]
    alpha = d.submatrix(keep_r1, [q])      # C_r(q) -> C_{r-1}(A)
    beta = d.submatrix([p], keep_r)        # C_r(B) -> C_{r-1}(p)
    delta = d.submatrix(keep_r1, keep_r)
    new_d = {}
    for s in range(C.lo + 1, C.hi + 1):
        if s == r:
            new_d[s] = delta - (alpha @ beta).scale(uinv)
        elif s == r + 1:
            m = C.d(s)
            new_d[s] = m.submatrix(keep_r, list(range(m.ncols)))
        elif s == r - 1:
            m = C.d(s)
            new_d[s] = m.submatrix(list(range(m.nrows)), keep_r1)
        else:
            new_d[s] = C.d(s)
    ranks = list(C.ranks)
    ranks[r - C.lo] -= 1
    ranks[r - 1 - C.lo] -= 1
    Cr = ChainComplex(ring, C.lo, ranks, new_d, check=False)

    proj, incl = {}, {}
    for s in C.degrees():
        n = C.rank(s)
        if s == r:
            proj[s] = Matrix.identity(ring, n).submatrix(keep_r, list(range(n)))
            # x_B -> (-u^{-1} beta x_B, x_B)
            rows = []
            for x in range(n):
                if x == q:
                    rows.append([-(uinv * beta[0, b]) for b in range(len(keep_r))])
                else:
                    rows.append([ring.one if keep_r[b] == x else ring.zero for b in range(len(keep_r))])
            incl[s] = Matrix(ring, n, len(keep_r), rows)
        elif s == r - 1:
            # y -> y_A - alpha u^{-1} y_p
            rows = []
            for a_idx, a in enumerate(keep_r1):
                row = [ring.zero] * n
                row[a] = ring.one
                row[p] = -(alpha[a_idx, 0] * uinv)
                rows.append(row)
            proj[s] = Matrix(ring, len(keep_r1), n, rows)
            incl[s] = Matrix.identity(ring, n).submatrix(list(range(n)), keep_r1)
        else:
            proj[s] = Matrix.identity(ring, n)
            incl[s] = Matrix.identity(ring, n)
    h = {r - 1: Matrix.zeros(ring, C.rank(r), C.rank(r - 1)).with_entry(q, p, uinv)}
    return Cr, ChainMap(C, Cr, proj, check=False), ChainMap(Cr, C, incl, check=False), h


def _expose_unit(C: ChainComplex):
    """Over Z: a change of basis (chain isomorphism) after which some d_r has a unit entry.

    Uses the Smith form U d_r V of the first differential with a unit
    invariant factor.  Returns (C', iso, iso^{-1}) or None if C is minimal.
    """
    R = C.ring
    for r in range(C.lo + 1, C.hi + 1):
        m = C.d(r)
        if m.is_zero():
            continue
        snf = smith_normal_form([list(row) for row in m.data], m.ncols)
        if snf.diag[0] != 1:
            continue
        M = lambda rows, k: Matrix(R, k, k, rows)
        fwd = {t: Matrix.identity(R, C.rank(t)) for t in C.degrees()}
        back = dict(fwd)
        # new basis of C_{r-1}: rows of U; of C_r: columns of V
        fwd[r - 1], back[r - 1] = M(snf.U, C.rank(r - 1)), M(snf.Uinv, C.rank(r - 1))
        fwd[r], back[r] = M(snf.Vinv, C.rank(r)), M(snf.V, C.rank(r))
        d = {t: fwd[t - 1] @ C.d(t) @ back[t] for t in range(C.lo + 1, C.hi + 1)}
        Cn = ChainComplex(R, C.lo, C.ranks, d, check=False)
        return Cn, ChainMap(C, Cn, fwd, check=False), ChainMap(Cn, C, back, check=False)
    return None


def reduce_complex(C: ChainComplex) -> Reduction:
    """Repeatedly cancel unit entries of the differentials.

    The result is chain homotopy equivalent to C; the returned maps and
    homotopy certify it.  Over Z a differential whose Smith form has a unit
    but no unit entry is first put in Smith form by a change of basis, so the
    result is minimal.  Over Z[Z/k] only units recognised by the ring
    (+-g^m) are cancelled.
    """
    cur = C
    proj = identity_map(C)
    incl = identity_map(C)
    H: dict[int, Matrix] = {}
    while True:
        found = _find_unit(cur)
        if found is None and isinstance(cur.ring, Integers):
            step = _expose_unit(cur)
            if step is not None:
                cur, fwd, back = step
                proj, incl = fwd.compose(proj), incl.compose(back)
                continue
        if found is None:
            break
        Cn, p, i, h = _eliminate(cur, *found)
        # H_total = H + incl h proj (homotopy on the original C)
        for s, hs in h.items():
            term = incl[s + 1] @ hs @ proj[s]
            H[s] = H[s] + term if s in H else term
        proj = p.compose(proj)
        incl = incl.compose(i)
        cur = Cn
    # trim to the support window but keep at least the original lo
    return Reduction(cur, proj, incl, H)


def reduction_homotopy(red: Reduction) -> ChainHomotopy:
    C = red.proj.source
    return ChainHomotopy(identity_map(C), red.incl.compose(red.proj), red.homotopy)
