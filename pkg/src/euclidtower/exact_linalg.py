"""Exact dense linear algebra over Q, F_p and cyclotomic fields.

Three scalar domains are supported:

* :data:`QQ` -- rationals, values are :class:`fractions.Fraction`.
* :func:`GF` ``(p)`` -- prime fields, values are :class:`FpElement`.
* :func:`Cyclotomics` ``(p)`` -- the p-th cyclotomic field, values are
  :class:`Cyclotomic` in the power basis ``1, z, ..., z^(p-2)``.

Everything is immutable. Elimination works on sparse dict rows internally, so
the ~200x200 systems that show up in the tower checks stay cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DomainError(TypeError):
    """Operation requires a field but the matrix lives over a ring."""


class DimensionMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# scalars


class FpElement:
    """Residue class mod a prime ``p``, stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", int(value) % p)

    def __setattr__(self, name, value):
        raise AttributeError("FpElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise DomainError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> FpElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpElement(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Cyclotomic:
    """Element of Q(z), z a primitive p-th root of unity.

    Coefficients are kept in the power basis ``1, z, ..., z^(p-2)``, which is a
    basis because ``1 + z + ... + z^(p-1) = 0``. Equality is coefficient-wise.
    Coefficients are rationals so that averages over finite sets stay exact.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence = ()):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > p - 1:
            # fold a length-p vector (mod z^p - 1) back into the power basis
            full = [Fraction(0)] * p
            for i, c in enumerate(coeffs):
                full[i % p] += c
            top = full[p - 1]
            coeffs = [c - top for c in full[: p - 1]]
        else:
            coeffs = coeffs + [Fraction(0)] * (p - 1 - len(coeffs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def zeta_power(cls, p: int, k: int) -> Cyclotomic:
        full = [0] * p
        full[k % p] = 1
        return cls(p, full)

    @classmethod
    def rational(cls, p: int, value) -> Cyclotomic:
        return cls(p, [value])

    def _lift(self, other) -> Cyclotomic:
        if isinstance(other, Cyclotomic):
            if other.p != self.p:
                raise DomainError(f"mixing Q(zeta_{self.p}) and Q(zeta_{other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, [a * other for a in self.coeffs])
        o = self._lift(other)
        if o is NotImplemented:
            return o
        p = self.p
        full = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        full[(i + j) % p] += a * b
        return Cyclotomic(p, full)

    __rmul__ = __mul__

    def galois(self, k: int) -> Cyclotomic:
        """Apply the automorphism z -> z^k (k prime to p)."""
        p = self.p
        full = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            full[(i * k) % p] += a
        return Cyclotomic(p, full)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def inverse(self) -> Cyclotomic:
        if not self:
            raise ZeroDivisionError("zero has no inverse")
        others = Cyclotomic(self.p, [1])
        for k in range(2, self.p):
            others = others * self.galois(k)
        norm = self * others
        assert norm.is_rational(), "norm left Q"
        return others * (1 / norm.coeffs[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic(self.p, [other]) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(self.p, [other])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Cyclotomic({self.p}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# --------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Rationals:
    name: str = "QQ"
    is_field: bool = True

    def __call__(self, x) -> Fraction:
        if isinstance(x, FpElement) or isinstance(x, Cyclotomic):
            raise DomainError(f"cannot coerce {x!r} into QQ")
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)


@dataclass(frozen=True)
class PrimeField:
    p: int
    is_field: bool = True

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise DomainError(f"{x!r} is not in {self.name}")
            return x
        if isinstance(x, Fraction):
            return FpElement(x.numerator, self.p) / FpElement(x.denominator, self.p)
        return FpElement(x, self.p)

    @property
    def zero(self):
        return FpElement(0, self.p)

    @property
    def one(self):
        return FpElement(1, self.p)


@dataclass(frozen=True)
class Cyclotomics:
    p: int
    is_field: bool = False  # treated as Z[z]: no elimination offered

    @property
    def name(self) -> str:
        return f"Z[zeta_{self.p}]"

    def __call__(self, x) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            if x.p != self.p:
                raise DomainError(f"{x!r} is not in {self.name}")
            return x
        return Cyclotomic(self.p, [x])

    @property
    def zero(self):
        return Cyclotomic(self.p)

    @property
    def one(self):
        return Cyclotomic(self.p, [1])

    def zeta(self, k: int = 1) -> Cyclotomic:
        return Cyclotomic.zeta_power(self.p, k)


QQ = Rationals()


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def GF(p: int) -> PrimeField:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return PrimeField(p)


def cyclotomics(p: int) -> Cyclotomics:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Cyclotomics(p)


# --------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Immutable rows x cols matrix with every entry in one domain."""

    __slots__ = ("rows", "cols", "domain", "_entries")

    def __init__(self, entries: Iterable[Iterable], domain=QQ, cols: int | None = None):
        grid = tuple(tuple(domain(x) for x in row) for row in entries)
        rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise DimensionMismatch("ragged entry grid")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "_entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, domain=QQ) -> ExactMatrix:
        cols = rows if cols is None else cols
        return cls([[domain.zero] * cols for _ in range(rows)], domain, cols=cols)

    @classmethod
    def identity(cls, n: int, domain=QQ) -> ExactMatrix:
        return cls(
            [[domain.one if i == j else domain.zero for j in range(n)] for i in range(n)], domain
        )

    @classmethod
    def from_entries(cls, n: int, entries: dict, domain=QQ, cols: int | None = None) -> ExactMatrix:
        """Build from a sparse ``{(row, col): value}`` dict."""
        cols = n if cols is None else cols
        grid = [[domain.zero] * cols for _ in range(n)]
        for (r, c), v in entries.items():
            grid[r][c] = domain(v)
        return cls(grid, domain, cols=cols)

    def __getitem__(self, rc):
        r, c = rc
        return self._entries[r][c]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list]:
        return [list(r) for r in self._entries]

    def row(self, i: int) -> tuple:
        return self._entries[i]

    def nonzero(self) -> dict:
        return {
            (i, j): v for i, row in enumerate(self._entries) for j, v in enumerate(row) if v
        }

    def transpose(self) -> ExactMatrix:
        if not self.rows:
            return ExactMatrix.zeros(self.cols, 0, self.domain)
        return ExactMatrix(zip(*self._entries), self.domain, cols=self.rows)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self._entries)
        return f"ExactMatrix<{self.domain.name} {self.rows}x{self.cols}>[{body}]"


def _check_same_domain(a: ExactMatrix, b: ExactMatrix):
    if a.domain != b.domain:
        raise DomainError(f"{a.domain.name} vs {b.domain.name}")


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    _check_same_domain(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    zero = a.domain.zero
    bcols = list(zip(*b._entries)) if b.rows else [()] * b.cols
    out = []
    for row in a._entries:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), zero) for col in bcols])
    return ExactMatrix(out, a.domain, cols=b.cols)


def matrix_power(a: ExactMatrix, k: int) -> ExactMatrix:
    if a.rows != a.cols:
        raise DimensionMismatch("matrix_power needs a square matrix")
    if k < 0:
        raise ValueError("negative powers are not supported")
    result = ExactMatrix.identity(a.rows, a.domain)
    for _ in range(k):
        result = matmul(result, a)
    return result


def _require_field(m: ExactMatrix):
    if not m.domain.is_field:
        raise DomainError(f"{m.domain.name} is not a field; elimination unavailable")


def _echelon(rows: list[dict], one) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows; returns (pivot rows, pivot cols)."""
    pivots: list[tuple[int, dict]] = []
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        for pc, prow in pivots:
            f = row.get(pc)
            if f:
                for c, v in prow.items():
                    nv = row.get(c, 0) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        if not row:
            continue
        pc = min(row)
        inv = one / row[pc]
        row = {c: v * inv for c, v in row.items()}
        # keep earlier pivot rows reduced against the new pivot
        for _, qrow in pivots:
            f = qrow.get(pc)
            if f:
                for c, v in row.items():
                    nv = qrow.get(c, 0) - f * v
                    if nv:
                        qrow[c] = nv
                    else:
                        qrow.pop(c, None)
        pivots.append((pc, row))
    pivots.sort(key=lambda t: t[0])
    return [r for _, r in pivots], [c for c, _ in pivots]


def _sparse_rows(m: ExactMatrix) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in m._entries]


def rank(m: ExactMatrix) -> int:
    _require_field(m)
    return len(_echelon(_sparse_rows(m), m.domain.one)[1])


def sparse_rank(vectors: Iterable[dict], domain=QQ) -> int:
    """Rank of a family of sparse vectors ``{key: value}`` (keys any hashable)."""
    keys: dict = {}
    rows = []
    for vec in vectors:
        rows.append({keys.setdefault(k, len(keys)): domain(v) for k, v in vec.items() if v})
    return len(_echelon(rows, domain.one)[1])


def kernel_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of the right null space ``{x : m x = 0}``, as tuples of length ``cols``."""
    _require_field(m)
    one, zero = m.domain.one, m.domain.zero
    prows, pcols = _echelon(_sparse_rows(m), one)
    free = [c for c in range(m.cols) if c not in set(pcols)]
    basis = []
    for fc in free:
        vec = [zero] * m.cols
        vec[fc] = one
        for pc, prow in zip(pcols, prows):
            v = prow.get(fc)
            if v:
                vec[pc] = -v
        basis.append(tuple(vec))
    return basis


def random_invertible(n: int, seed: int) -> ExactMatrix:
    """Seeded invertible rational matrix with entries in {-2, ..., 2}."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    while True:
        m = ExactMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if rank(m) == n:
            return m


def inverse(m: ExactMatrix) -> ExactMatrix:
    _require_field(m)
    n = m.rows
    if n != m.cols:
        raise DimensionMismatch("only square matrices are invertible")
    one = m.domain.one
    aug = [
        {**{j: v for j, v in enumerate(row) if v}, n + i: one} for i, row in enumerate(m._entries)
    ]
    prows, pcols = _echelon(aug, one)
    if pcols[:n] != list(range(n)) or len(pcols) != n:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix(
        [[r.get(n + j, m.domain.zero) for j in range(n)] for r in prows], m.domain
    )


def jordan_block(n: int, domain=QQ) -> ExactMatrix:
    """Nilpotent Jordan block: ones on the superdiagonal."""
    return ExactMatrix.from_entries(n, {(i, i + 1): 1 for i in range(n - 1)}, domain)
