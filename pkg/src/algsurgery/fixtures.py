"""Geometric examples as structured complexes: spheres, the small model of a
surgery on an embedded S^i x D^{n-i}, and the two surgeries on S^0 x D^1 in S^1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chains import ChainComplex, ChainError, ChainMap, mapping_cone, sphere_complex
from .forms import EpsQuadraticForm, form_complex, hyperbolic
from .rings import ZZ, Matrix
from .sampling import sphere_structure
from .structures import (QUAD, StructuredComplex, StructuredPair, check_pair, check_structure, is_poincare)


@dataclass
class FixtureDescriptor:
    name: str
    params: dict = field(default_factory=dict)
    provenance: str = ""


def _validated(X: StructuredComplex, poincare: bool = True) -> StructuredComplex:
    rep = check_structure(X)
    if not rep.ok:
        raise ChainError("fixture fails validation: " + "; ".join(rep.failures[:3]))
    if poincare and not is_poincare(X).ok:
        raise ChainError("fixture is not Poincare")
    return X


def sphere(n: int) -> StructuredComplex:
    """S^n over Z: one cell in degrees 0 and n (two points for n = 0), phi_0 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _validated(sphere_structure(ZZ, n))


def quadratic_sphere(n: int) -> StructuredComplex:
    """S^n (n >= 1) over Z with psi_0 = 1: C^n -> C_0 refining the fundamental class."""
    return _validated(sphere_structure(ZZ, n, QUAD))


E8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def e8_form() -> EpsQuadraticForm:
    """The E8 lattice with its even refinement mu(e) = lambda(e, e)/2 = 1."""
    return EpsQuadraticForm(ZZ, 0, Matrix(ZZ, 8, 8, E8_GRAM), [1] * 8)


def arf_one_form() -> EpsQuadraticForm:
    """Rank 2, lambda = [[0, 1], [-1, 0]], mu = (1, 1): the Arf invariant one form."""
    return EpsQuadraticForm(ZZ, 1, Matrix(ZZ, 2, 2, [[0, 1], [-1, 0]]), [1, 1])


def e8_complex(n: int = 4) -> StructuredComplex:
    return _validated(form_complex(e8_form(), n))


def hyperbolic_complex(g: int = 1, n: int = 2) -> StructuredComplex:
    return _validated(form_complex(hyperbolic(g, (n // 2) % 2), n))


def small_effect(C: ChainComplex, x: ChainMap, y: Matrix, n: int, i: int) -> ChainComplex:
    """The reduced model of the effect of surgery on S^i x D^{n-i}.

    C' is C with an extra Z in degree i+1, mapped to C_i by x, and an extra Z
    in degree n-i-1, hit from C(x)_{n-i} by the cochain y (a 1-row matrix on
    the cone of x: S^i Z -> C in degree n-i).
    """
    R = C.ring
    if x.source.rank(i) != 1 or any(x.source.rank(r) for r in x.source.degrees() if r != i):
        raise ChainError("x must start at S^i Z")
    cone = mapping_cone(x)
    k = n - i
    if y.nrows != 1 or y.ncols != cone.rank(k):
        raise ChainError(f"y must be a 1 x {cone.rank(k)} cochain on C(x)_{k}")
    if not (y @ cone.d(k + 1)).is_zero():
        raise ChainError("y is not a cocycle on the cone of x")
    # cone degree k is C_k + (S^i Z)_{k-1}; split y accordingly
    yc = y.submatrix([0], range(C.rank(k)))
    ys = y.submatrix([0], range(C.rank(k), cone.rank(k)))
    lo, hi = min(C.lo, k - 1, i + 1), max(C.hi, k - 1, i + 1)
    extra = lambda r: (int(r == i + 1), int(r == k - 1))
    rk = lambda r: [C.rank(r), *extra(r)]
    d = {}
    for r in range(lo + 1, hi + 1):
        blocks = [[C.d(r), 0, 0], [0, 0, 0], [0, 0, 0]]
        if r == i + 1:
            blocks[0][1] = x[i]
        if r == k:
            blocks[2][0] = yc
            if r == i + 1:
                blocks[2][1] = ys
        d[r] = Matrix.block(R, blocks, rk(r - 1), rk(r))
    return ChainComplex(R, lo, [sum(rk(r)) for r in range(lo, hi + 1)], d)


def double_cover_surgery(variant: str) -> StructuredPair:
    """Quadratic surgery data on the circle whose effect is a double cover of it.

    orientable: D = S^1 Z, j = 0, no relative structure; the effect is
    S^1 + S^1 with H = (Z^2, Z^2).
    nonorientable: D = S^1 Z + S^1 Z with j hitting the first summand; the
    effect has H = (Z, Z).  Over Z with trivial coefficients no choice of the
    relative structure alone turns the first into the second (see README).
    """
    X = quadratic_sphere(1)
    C = X.C
    if variant == "orientable":
        D = sphere_complex(ZZ, 1)
        j = ChainMap(C, D, {0: Matrix.zeros(ZZ, 0, 1), 1: Matrix.zeros(ZZ, 1, 1)})
    elif variant == "nonorientable":
        D = sphere_complex(ZZ, 1, 2)
        j = ChainMap(C, D, {0: Matrix.zeros(ZZ, 0, 1), 1: Matrix(ZZ, 2, 1, [[1], [0]])})
    else:
        raise ValueError("variant must be 'orientable' or 'nonorientable'")
    P = StructuredPair(j, X, {})
    rep = check_pair(P)
    if not rep.ok:
        raise ChainError("double cover data fails validation: " + "; ".join(rep.failures[:3]))
    return P


FIXTURES = {
    "sphere": FixtureDescriptor("sphere", {"n": 2}, "minimal CW structure of S^n with its fundamental class"),
    "quadratic-sphere": FixtureDescriptor("quadratic-sphere", {"n": 1}, "S^n with a quadratic refinement"),
    "e8": FixtureDescriptor("e8", {"n": 4}, "E8 form in the middle degree; signature 8"),
    "hyperbolic": FixtureDescriptor("hyperbolic", {"g": 1, "n": 2}, "hyperbolic form in the middle degree"),
    "arf-one": FixtureDescriptor("arf-one", {"n": 2}, "rank-2 (-1)-quadratic form with Arf invariant 1"),
    "double-cover": FixtureDescriptor("double-cover", {"variant": "orientable"},
                                      "surgery on S^0 x D^1 in S^1 (trivial or nontrivial double cover)"),
}


def build(name: str, **params):
    """Construct the named fixture; returns a structured complex or pair."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    p = {**FIXTURES[name].params, **{k: v for k, v in params.items() if v is not None}}
    if name == "sphere":
        return sphere(int(p["n"]))
    if name == "quadratic-sphere":
        return quadratic_sphere(int(p["n"]))
    if name == "e8":
        return e8_complex(int(p["n"]))
    if name == "hyperbolic":
        return hyperbolic_complex(int(p["g"]), int(p["n"]))
    if name == "arf-one":
        return _validated(form_complex(arf_one_form(), int(p["n"])))
    return double_cover_surgery(p["variant"])
