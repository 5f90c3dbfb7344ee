"""JSON formats for rings, complexes, structures, pairs, cobordisms and forms.

Integer-keyed dictionaries are written with string keys in increasing
numeric order so that output is deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

from .chains import ChainComplex, ChainMap
from .forms import EpsQuadraticForm, Formation
from .rings import Matrix, MatrixError, Ring, RingError, matrix_from_json, ring_from_json
from .structures import QUAD, SYM, StructuredComplex, StructuredPair


class FormatError(ValueError):
    """Malformed input file."""


def _keyed(d: dict) -> dict:
    return {str(k): d[k] for k in sorted(d)}


def _int_keys(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise FormatError(f"{what}: expected an object keyed by degree")
    out = {}
    for k, v in obj.items():
        try:
            out[int(k)] = v
        except ValueError:
            raise FormatError(f"{what}: key {k!r} is not an integer") from None
    return out


def _matrix(ring: Ring, rows, m: int, n: int, what: str) -> Matrix:
    try:
        return matrix_from_json(ring, rows, m, n)
    except (MatrixError, RingError, TypeError, ValueError) as e:
        raise FormatError(f"{what}: {e}") from None


def _ring(obj) -> Ring:
    if "ring" not in obj:
        raise FormatError("missing 'ring' key")
    try:
        return ring_from_json(obj)
    except RingError as e:
        raise FormatError(str(e)) from None


# ----------------------------------------------------------------------------
# complexes


def complex_to_json(C: ChainComplex) -> dict:
    d = {r: C.d(r).to_json() for r in range(C.lo + 1, C.hi + 1) if not C.d(r).is_zero()}
    return {**C.ring.to_json(), "lo": C.lo, "ranks": list(C.ranks), "d": _keyed(d)}


def complex_from_json(obj, check: bool = True) -> ChainComplex:
    """With check=False only shapes are enforced, so a validator can report d^2 != 0."""
    if not isinstance(obj, dict):
        raise FormatError("complex: expected an object")
    R = _ring(obj)
    lo, ranks = obj.get("lo", 0), obj.get("ranks")
    if not isinstance(lo, int) or not isinstance(ranks, list) or not all(isinstance(x, int) and x >= 0 for x in ranks):
        raise FormatError("complex: need integer 'lo' and a list of nonnegative 'ranks'")
    rank = lambda r: ranks[r - lo] if lo <= r < lo + len(ranks) else 0
    d = {}
    for r, rows in _int_keys(obj.get("d", {}), "d").items():
        d[r] = _matrix(R, rows, rank(r - 1), rank(r), f"d[{r}]")
    try:
        return ChainComplex(R, lo, ranks, d, check=check)
    except ValueError as e:
        raise FormatError(f"complex: {e}") from None


def chain_map_to_json(f: ChainMap) -> dict:
    return {"source": complex_to_json(f.source), "target": complex_to_json(f.target),
            "maps": _keyed({r: f[r].to_json() for r in f.source.degrees()})}


def chain_map_from_json(obj) -> ChainMap:
    if not isinstance(obj, dict) or "source" not in obj or "target" not in obj:
        raise FormatError("chain map: need 'source' and 'target' complexes")
    C, D = complex_from_json(obj["source"]), complex_from_json(obj["target"])
    maps = {r: _matrix(C.ring, rows, D.rank(r), C.rank(r), f"maps[{r}]")
            for r, rows in _int_keys(obj.get("maps", {}), "maps").items()}
    try:
        return ChainMap(C, D, maps)
    except ValueError as e:
        raise FormatError(f"chain map: {e}") from None


# ----------------------------------------------------------------------------
# structures


def _nested_to_json(maps: dict) -> dict:
    by_s: dict = {}
    for (s, r), m in maps.items():
        by_s.setdefault(s, {})[r] = m.to_json()
    return {str(s): _keyed(by_s[s]) for s in sorted(by_s)}


def structured_to_json(X: StructuredComplex) -> dict:
    return {**complex_to_json(X.C), "kind": X.kind, "n": X.n, "maps": _nested_to_json(X.maps)}


def structured_from_json(obj, check: bool = True) -> StructuredComplex:
    C = complex_from_json(obj, check)
    kind, n = obj.get("kind"), obj.get("n")
    if kind not in (SYM, QUAD) or not isinstance(n, int):
        raise FormatError("structured complex: need 'kind' ('sym' or 'quad') and integer 'n'")
    maps = {}
    for s, inner in _int_keys(obj.get("maps", {}), "maps").items():
        if s < 0:
            raise FormatError(f"maps: negative s={s}")
        for r, rows in _int_keys(inner, f"maps[{s}]").items():
            p = n - r + s if kind == SYM else n - r - s
            maps[(s, r)] = _matrix(C.ring, rows, C.rank(r), C.rank(p), f"maps[{s}][{r}]")
    try:
        return StructuredComplex(kind, C, n, maps)
    except ValueError as e:
        raise FormatError(f"structured complex: {e}") from None


def pair_to_json(P: StructuredPair) -> dict:
    return {"boundary": structured_to_json(P.boundary), "target": complex_to_json(P.D),
            "j": _keyed({r: P.j[r].to_json() for r in P.C.degrees()}), "delta": _nested_to_json(P.delta)}


def _resolve(ref, base: Path | None, what: str):
    """An inline object, or a path (relative to the referencing file) to one."""
    if isinstance(ref, dict):
        return ref
    if isinstance(ref, str):
        path = Path(ref) if base is None else base / ref
        return read_json(path)
    raise FormatError(f"{what}: expected an object or a file name")


def _delta(obj, X_n: int, kind: str, D: ChainComplex, what: str = "delta") -> dict:
    delta = {}
    for s, inner in _int_keys(obj or {}, what).items():
        for r, rows in _int_keys(inner, f"{what}[{s}]").items():
            p = X_n + 1 - r + s if kind == SYM else X_n + 1 - r - s
            delta[(s, r)] = _matrix(D.ring, rows, D.rank(r), D.rank(p), f"{what}[{s}][{r}]")
    return delta


def pair_from_json(obj, base: Path | None = None) -> StructuredPair:
    if not isinstance(obj, dict) or "j" not in obj:
        raise FormatError("surgery data: need 'boundary', 'target' and 'j'")
    X = structured_from_json(_resolve(obj.get("boundary"), base, "boundary"))
    D = complex_from_json(_resolve(obj.get("target"), base, "target"))
    C = X.C
    j = {r: _matrix(C.ring, rows, D.rank(r), C.rank(r), f"j[{r}]") for r, rows in _int_keys(obj["j"], "j").items()}
    try:
        return StructuredPair(ChainMap(C, D, j), X, _delta(obj.get("delta"), X.n, X.kind, D))
    except ValueError as e:
        raise FormatError(f"surgery data: {e}") from None


def cobordism_to_json(G) -> dict:
    return {"left": structured_to_json(G.left), "right": structured_to_json(G.right),
            "target": complex_to_json(G.D),
            "f": _keyed({r: G.f[r].to_json() for r in G.left.C.degrees()}),
            "f_prime": _keyed({r: G.f_prime[r].to_json() for r in G.right.C.degrees()}),
            "delta": _nested_to_json(G.delta)}


def cobordism_from_json(obj, base: Path | None = None):
    from .surgery import make_cobordism

    X = structured_from_json(_resolve(obj.get("left"), base, "left"))
    Y = structured_from_json(_resolve(obj.get("right"), base, "right"))
    D = complex_from_json(_resolve(obj.get("target"), base, "target"))
    R = D.ring
    f = {r: _matrix(R, rows, D.rank(r), X.C.rank(r), f"f[{r}]") for r, rows in _int_keys(obj.get("f", {}), "f").items()}
    g = {r: _matrix(R, rows, D.rank(r), Y.C.rank(r), f"f_prime[{r}]")
         for r, rows in _int_keys(obj.get("f_prime", {}), "f_prime").items()}
    try:
        return make_cobordism(ChainMap(X.C, D, f), ChainMap(Y.C, D, g), _delta(obj.get("delta"), X.n, X.kind, D), X, Y)
    except ValueError as e:
        raise FormatError(f"cobordism: {e}") from None


# ----------------------------------------------------------------------------
# forms


def form_to_json(q: EpsQuadraticForm) -> dict:
    return {**q.ring.to_json(), "i": q.i, "lambda": q.lam.to_json(), "mu": [q.ring.elem_to_json(c.rep) for c in q.mu]}


def form_from_json(obj) -> EpsQuadraticForm:
    R = _ring(obj)
    i, lam, mu = obj.get("i"), obj.get("lambda"), obj.get("mu")
    if not isinstance(i, int) or not isinstance(lam, list) or not isinstance(mu, list):
        raise FormatError("form: need integer 'i', matrix 'lambda' and list 'mu'")
    m = len(lam)
    L = _matrix(R, lam, m, m, "lambda")
    try:
        return EpsQuadraticForm(R, i, L, [R.elem_from_json(x) for x in mu])
    except (ValueError, TypeError) as e:
        raise FormatError(f"form: {e}") from None


def formation_to_json(phi: Formation) -> dict:
    return {**form_to_json(phi.form), "F": phi.F.to_json(), "G": phi.G.to_json()}


def _columns(R: Ring, rows, m: int, what: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != m:
        raise FormatError(f"{what}: expected {m} rows")
    ncols = len(rows[0]) if rows else 0
    return _matrix(R, rows, m, ncols, what)


def formation_from_json(obj):
    """Returns (formation, optional witness lagrangian H)."""
    q = form_from_json(obj)
    F, G = (_columns(q.ring, obj.get(k), q.rank, k) for k in ("F", "G"))
    H = _columns(q.ring, obj["H"], q.rank, "H") if "H" in obj else None
    return Formation(q, F, G), H


# ----------------------------------------------------------------------------
# files


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    return loads(text, str(path))


def loads(text: str, name: str = "input") -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{name}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise FormatError(f"{name}: top level must be an object")
    return obj


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1) + "\n"


def detect(obj: dict) -> str:
    """Which format an object is in."""
    if "lambda" in obj:
        return "formation" if "F" in obj else "form"
    if "left" in obj:
        return "cobordism"
    if "j" in obj:
        return "pair"
    if "source" in obj:
        return "map"
    if "kind" in obj:
        return "structured"
    if "ranks" in obj:
        return "complex"
    raise FormatError("unrecognised file: no 'ranks', 'kind', 'j', 'left', 'source' or 'lambda' key")
