"""Rings with involution, the quotients Q_{+-1}(A), and exact matrices over them.

Three coefficient rings are supported: the integers, the rationals and the
integral group ring Z[Z/k] of a finite cyclic group.  Elements of Z and Q are
plain ``int`` and ``Fraction`` values; elements of Z[Z/k] are
:class:`CyclicElem` coefficient vectors indexed by g^0, ..., g^{k-1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence


class RingError(ValueError):
    pass


class CyclicElem:
    """An element sum n_m g^m of Z[Z/k]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicElem is immutable")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def _lift(self, other) -> "CyclicElem":
        if isinstance(other, CyclicElem):
            if other.k != self.k:
                raise RingError(f"mixing Z[Z/{self.k}] and Z[Z/{other.k}]")
            return other
        if isinstance(other, int):
            return CyclicElem((other,) + (0,) * (self.k - 1))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclicElem(a + b for a, b in zip(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CyclicElem(-a for a in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclicElem(a - b for a, b in zip(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclicElem(a * other for a in self.coeffs)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        k = self.k
        out = [0] * k
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[(i + j) % k] += a * b
        return CyclicElem(out)

    def __rmul__(self, other):
        # Z[Z/k] is commutative
        return self.__mul__(other)

    def __eq__(self, other):
        if isinstance(other, CyclicElem):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash(("ZC", self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            g = "" if m == 0 else ("g" if m == 1 else f"g^{m}")
            if not g:
                terms.append(str(c))
            elif c == 1:
                terms.append(g)
            elif c == -1:
                terms.append("-" + g)
            else:
                terms.append(f"{c}{g}")
        return "+".join(terms).replace("+-", "-") if terms else "0"


class Ring:
    """A commutative ring with involution, as used for coefficients."""

    name = "?"
    #: rank as a free abelian group (Z and Z[Z/k]); None for Q
    zrank: int | None = None

    zero: Any = 0
    one: Any = 1

    def involute(self, a):
        return a

    def coerce(self, x):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def elem_to_json(self, a):
        raise NotImplementedError

    def elem_from_json(self, x):
        return self.coerce(x)

    def to_ints(self, a) -> tuple[int, ...]:
        raise RingError(f"{self.name} is not a free abelian group of finite rank")

    def from_ints(self, v: Sequence[int]):
        raise RingError(f"{self.name} is not a free abelian group of finite rank")

    def random_elem(self, rng: random.Random, bound: int = 2):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(tuple(sorted(self.to_json().items())))

    def __repr__(self):
        return self.name


class Integers(Ring):
    name = "Z"
    zrank = 1

    def coerce(self, x):
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise RingError(f"not an integer: {x!r}")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingError(f"not an integer: {x}")
            return int(x)
        return x

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        if a not in (1, -1):
            raise RingError(f"{a} is not a unit of Z")
        return a

    def to_json(self):
        return {"ring": "Z"}

    def elem_to_json(self, a):
        return a

    def to_ints(self, a):
        return (a,)

    def from_ints(self, v):
        return int(v[0])

    def random_elem(self, rng, bound=2):
        return rng.randint(-bound, bound)


class Rationals(Ring):
    name = "Q"
    zrank = None
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, bool):
            raise RingError(f"not a rational: {x!r}")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise RingError(f"not a rational: {x!r}")

    def is_unit(self, a):
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise RingError("0 is not invertible")
        return 1 / Fraction(a)

    def to_json(self):
        return {"ring": "Q"}

    def elem_to_json(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else str(a)

    def random_elem(self, rng, bound=2):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


class CyclicGroupRing(Ring):
    """Z[Z/k] with the involution g -> g^{-1}."""

    def __init__(self, k: int):
        if k < 1:
            raise RingError("cyclic group order must be >= 1")
        self.k = k
        self.name = f"Z[Z/{k}]"
        self.zrank = k
        self.zero = CyclicElem((0,) * k)
        self.one = CyclicElem((1,) + (0,) * (k - 1))

    def g(self, m: int = 1) -> CyclicElem:
        v = [0] * self.k
        v[m % self.k] = 1
        return CyclicElem(v)

    def involute(self, a):
        c = a.coeffs
        return CyclicElem(c[(-m) % self.k] for m in range(self.k))

    def coerce(self, x):
        if isinstance(x, CyclicElem):
            if x.k != self.k:
                raise RingError(f"element of Z[Z/{x.k}] given for {self.name}")
            return x
        if isinstance(x, bool):
            raise RingError(f"not a group ring element: {x!r}")
        if isinstance(x, int):
            return CyclicElem((x,) + (0,) * (self.k - 1))
        if isinstance(x, (list, tuple)):
            if len(x) != self.k or not all(isinstance(c, int) and not isinstance(c, bool) for c in x):
                raise RingError(f"expected {self.k} integer coefficients, got {x!r}")
            return CyclicElem(x)
        raise RingError(f"not a group ring element: {x!r}")

    def is_unit(self, a):
        # only the trivial units +-g^m are recognised; enough for elimination
        nz = [c for c in a.coeffs if c]
        return len(nz) == 1 and nz[0] in (1, -1)

    def inverse(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a trivial unit of {self.name}")
        m = next(i for i, c in enumerate(a.coeffs) if c)
        return self.g(-m) * a.coeffs[m]

    def to_json(self):
        return {"ring": "ZC", "k": self.k}

    def elem_to_json(self, a):
        return list(a.coeffs)

    def to_ints(self, a):
        return a.coeffs

    def from_ints(self, v):
        return CyclicElem(v)

    def regular(self, a) -> list[list[int]]:
        """Integer matrix of multiplication by ``a`` on the basis g^0..g^{k-1}."""
        k = self.k
        return [[a.coeffs[(row - col) % k] for col in range(k)] for row in range(k)]

    def random_elem(self, rng, bound=2):
        return CyclicElem(rng.randint(-bound, bound) for _ in range(self.k))


ZZ = Integers()
QQ = Rationals()


@lru_cache(maxsize=None)
def cyclic(k: int) -> CyclicGroupRing:
    return CyclicGroupRing(k)


def ring_from_json(obj: dict) -> Ring:
    kind = obj.get("ring")
    if kind == "Z":
        return ZZ
    if kind == "Q":
        return QQ
    if kind == "ZC":
        k = obj.get("k")
        if not isinstance(k, int) or k < 1:
            raise RingError(f"ZC ring needs a positive integer k, got {k!r}")
        return cyclic(k)
    raise RingError(f"unknown ring {kind!r}")


def parse_ring(text: str) -> Ring:
    """Parse a command-line ring name: ``Z``, ``Q`` or ``ZC3``."""
    text = text.strip()
    if text == "Z":
        return ZZ
    if text == "Q":
        return QQ
    if text.startswith("ZC") and text[2:].isdigit():
        return cyclic(int(text[2:]))
    raise RingError(f"unknown ring {text!r}")


def involute(ring: Ring, a):
    return ring.involute(a)


# ----------------------------------------------------------------------------
# Q_{(-)^i}(A) = A / {a - (-)^i abar}


@dataclass(frozen=True)
class QClass:
    """A class in Q_{(-)^i}(A), held by its canonical representative."""

    ring: Ring
    parity: int
    rep: Any

    def __add__(self, other: "QClass") -> "QClass":
        self._check(other)
        return q_reduce(self.ring, self.rep + other.rep, self.parity)

    def __neg__(self):
        return q_reduce(self.ring, -self.rep, self.parity)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return self.rep == self.ring.zero

    def _check(self, other):
        if self.ring != other.ring or self.parity != other.parity:
            raise RingError("QClass values from different quotients")


@lru_cache(maxsize=None)
def _q_lattice(ring: Ring, parity: int):
    """Smith data for the subgroup {a - eps abar} of the additive group of A."""
    from .smith import smith_normal_form

    eps = -1 if parity % 2 else 1
    k = ring.zrank
    gens = []
    for m in range(k):
        basis = [0] * k
        basis[m] = 1
        a = ring.from_ints(basis)
        gens.append(ring.to_ints(a - ring.involute(a) * eps))
    # columns are generators
    mat = [[gens[c][r] for c in range(k)] for r in range(k)]
    return smith_normal_form(mat)


def q_reduce(ring: Ring, a, parity: int) -> QClass:
    """Canonical class of ``a`` in Q_{(-)^parity}(A)."""
    parity %= 2
    a = ring.coerce(a)
    eps = -1 if parity else 1
    if isinstance(ring, Rationals):
        # a - eps abar = (1 - eps) a: everything when eps = -1, nothing when eps = 1
        return QClass(ring, parity, a if eps == 1 else ring.zero)
    snf = _q_lattice(ring, parity)
    coords = ring.to_ints(a)
    y = [sum(u * c for u, c in zip(row, coords)) for row in snf.U]
    for t in range(len(y)):
        s = snf.diag[t] if t < len(snf.diag) else 0
        if s:
            y[t] %= s
    # back to coordinates of A: a_canon = U^{-1} y
    canon = [sum(row[t] * y[t] for t in range(len(y))) for row in snf.Uinv]
    return QClass(ring, parity, ring.from_ints(canon))


# ----------------------------------------------------------------------------
# matrices


class MatrixError(ValueError):
    pass


class Matrix:
    """An immutable rows x cols matrix over a :class:`Ring`.

    A matrix of shape (m, n) represents a morphism A^n -> A^m acting on
    column vectors.
    """

    __slots__ = ("ring", "nrows", "ncols", "data")

    def __init__(self, ring: Ring, nrows: int, ncols: int, data: Sequence[Sequence] | None = None):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        if data is None:
            rows = tuple((ring.zero,) * ncols for _ in range(nrows))
        else:
            if len(data) != nrows or any(len(row) != ncols for row in data):
                raise MatrixError(f"data does not have shape {nrows}x{ncols}")
            rows = tuple(tuple(ring.coerce(x) for x in row) for row in data)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, ring, nrows, ncols, rows):
        m = object.__new__(cls)
        object.__setattr__(m, "ring", ring)
        object.__setattr__(m, "nrows", nrows)
        object.__setattr__(m, "ncols", ncols)
        object.__setattr__(m, "data", rows)
        return m

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero
        return cls._raw(ring, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_rows(cls, ring, rows, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def block(cls, ring, blocks: Sequence[Sequence["Matrix | int"]], row_sizes: Sequence[int], col_sizes: Sequence[int]):
        """Assemble a block matrix; a block may be 0 (zero) or 1/-1 (signed identity)."""
        out = []
        for bi, rs in enumerate(row_sizes):
            rowblocks = []
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if isinstance(b, int):
                    if b == 0:
                        b = cls.zeros(ring, rs, cs)
                    else:
                        if rs != cs:
                            raise MatrixError(f"identity block needs a square slot, got {rs}x{cs}")
                        b = cls.identity(ring, rs).scale(b)
                if (b.nrows, b.ncols) != (rs, cs):
                    raise MatrixError(f"block ({bi},{bj}) has shape {b.nrows}x{b.ncols}, expected {rs}x{cs}")
                rowblocks.append(b)
            for i in range(rs):
                row = []
                for b in rowblocks:
                    row.extend(b.data[i])
                out.append(tuple(row))
        return cls._raw(ring, sum(row_sizes), sum(col_sizes), tuple(out))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, self.data))

    def __repr__(self):
        return f"Matrix({self.ring}, {[list(r) for r in self.data]})"

    def _same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise MatrixError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix"):
        self._same(other)
        return Matrix._raw(self.ring, self.nrows, self.ncols,
                           tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix"):
        self._same(other)
        return Matrix._raw(self.ring, self.nrows, self.ncols,
                           tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if c == 1:
            return self
        return Matrix._raw(self.ring, self.nrows, self.ncols, tuple(tuple(a * c for a in r) for r in self.data))

    def __matmul__(self, other: "Matrix"):
        return matmul(self, other)

    def star(self) -> "Matrix":
        """Conjugate transpose: (M*)_{pq} = involute(M_{qp})."""
        inv = self.ring.involute
        return Matrix._raw(self.ring, self.ncols, self.nrows,
                           tuple(tuple(inv(self.data[q][p]) for q in range(self.nrows)) for p in range(self.ncols)))

    def transpose(self):
        return Matrix._raw(self.ring, self.ncols, self.nrows,
                           tuple(tuple(self.data[q][p] for q in range(self.nrows)) for p in range(self.ncols)))

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(a == z for r in self.data for a in r)

    def nonzero_entries(self):
        z = self.ring.zero
        return [(i, j) for i, r in enumerate(self.data) for j, a in enumerate(r) if a != z]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return Matrix._raw(self.ring, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def with_entry(self, i, j, value):
        data = [list(r) for r in self.data]
        data[i][j] = self.ring.coerce(value)
        return Matrix._raw(self.ring, self.nrows, self.ncols, tuple(tuple(r) for r in data))

    def map(self, fn: Callable):
        return Matrix._raw(self.ring, self.nrows, self.ncols, tuple(tuple(fn(a) for a in r) for r in self.data))

    def tolist(self):
        return [list(r) for r in self.data]

    def to_json(self):
        return [[self.ring.elem_to_json(a) for a in r] for r in self.data]


def matmul(M: Matrix, N: Matrix) -> Matrix:
    if M.ring != N.ring:
        raise MatrixError(f"ring mismatch {M.ring} vs {N.ring}")
    if M.ncols != N.nrows:
        raise MatrixError(f"cannot multiply {M.nrows}x{M.ncols} by {N.nrows}x{N.ncols}")
    ring = M.ring
    z = ring.zero
    cols = N.transpose().data if N.nrows else tuple(() for _ in range(N.ncols))
    out = []
    for r in M.data:
        row = []
        for c in cols:
            acc = z
            for a, b in zip(r, c):
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        out.append(tuple(row))
    return Matrix._raw(ring, M.nrows, N.ncols, tuple(out))


def ring_matmul(M: Matrix, N: Matrix) -> Matrix:
    return matmul(M, N)


def matrix_from_json(ring: Ring, rows, nrows: int, ncols: int) -> Matrix:
    if rows is None:
        return Matrix.zeros(ring, nrows, ncols)
    if not isinstance(rows, list) or len(rows) != nrows:
        raise MatrixError(f"expected {nrows} rows, got {rows!r}")
    data = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ncols:
            raise MatrixError(f"row {i}: expected {ncols} entries")
        data.append([ring.elem_from_json(x) for x in row])
    return Matrix(ring, nrows, ncols, data)
