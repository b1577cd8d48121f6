"""Finite doubled-field model of automorphic functions and Fourier coefficients.

``E = F_q`` plays the global field, embedded diagonally in ``A = E x E``.
Every quotient ``G(k)\\G(A)`` is then finite and is identified with ``G(E)`` via
``(g, h) -> g^{-1} h``, so an automorphic function is just a table on ``G(E)``.

Measure conventions (they make the unfolding identity hold with constant 1):

* compact unipotent quotients ``D(k)\\D(A)`` have volume 1, so Fourier
  coefficients are plain averages over ``D(E)``;
* discrete groups carry counting measure, and the measures on ``H(A)`` and
  ``Z(A)`` are normalised to point mass 1, so a sum over ``H(k)Z(A)\\H(A)``
  counts each class once, while a class of ``(V^1 Z)(A)\\H(A)`` has mass
  ``q^{dim V^1}``.

Group elements of ``G(E)`` are flat row-major tuples of ints mod ``q``;
elements of ``G(A)`` are pairs of those.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_linalg import GF, Cyclotomic, Cyclotomics, ExactMatrix, rank
from .tower import AdditiveFunction, Tower, build_block_tower, build_tower

Mat = tuple  # flat n*n tuple over F_q
Pair = tuple  # (Mat, Mat), an element of G(A)

DEFAULT_LIMIT = 3**9


class SizeLimit(RuntimeError):
    pass


class WellDefinednessFailure(RuntimeError):
    pass


class IntegrandNotInvariant(RuntimeError):
    pass


class NotAdditive(ValueError):
    """No homomorphism ``D_F(E) -> F_q`` agrees with ``F`` on every ``V_i``."""


# --------------------------------------------------------------------------
# matrices over F_q


def identity(n: int) -> Mat:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


@functools.lru_cache(maxsize=1 << 20)
def mat_mul(a: Mat, b: Mat, n: int, q: int) -> Mat:
    cols = [b[j::n] for j in range(n)]
    return tuple(
        sum(x * y for x, y in zip(a[i * n : i * n + n], col)) % q for i in range(n) for col in cols
    )


def mat_inv(a: Mat, n: int, q: int) -> Mat:
    m = [list(a[i * n : (i + 1) * n]) + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] % q), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        inv = pow(m[c][c], -1, q)
        m[c] = [x * inv % q for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[c])]
    return tuple(x for row in m for x in row[n:])


def det(a: Mat, n: int, q: int) -> int:
    m = [list(a[i * n : (i + 1) * n]) for i in range(n)]
    d = 1
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] % q), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d = d * m[c][c] % q
        inv = pow(m[c][c], -1, q)
        for r in range(c + 1, n):
            f = m[r][c] * inv % q
            if f:
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[c])]
    return d % q


def block_diag(a: Mat, n1: int, b: Mat, n2: int) -> Mat:
    n = n1 + n2
    out = [0] * (n * n)
    for i in range(n1):
        for j in range(n1):
            out[i * n + j] = a[i * n1 + j]
    for i in range(n2):
        for j in range(n2):
            out[(n1 + i) * n + n1 + j] = b[i * n2 + j]
    return tuple(out)


def block(m: Mat, n: int, rows: range, cols: range) -> Mat:
    return tuple(m[i * n + j] for i in rows for j in cols)


def scalar(c: int, n: int) -> Mat:
    return tuple(c if i == j else 0 for i in range(n) for j in range(n))


def enumerate_gl(n: int, q: int, limit: int = DEFAULT_LIMIT) -> list[Mat]:
    """All of ``GL_n(F_q)`` in lexicographic order of the flat entries."""
    if q ** (n * n) > limit:
        raise SizeLimit(f"q^(n^2) = {q ** (n * n)} exceeds limit {limit}")
    return [m for m in itertools.product(range(q), repeat=n * n) if det(m, n, q)]


class MatrixGroup:
    """A finite subgroup of ``GL_n(F_q)`` given by its elements, with cached inverses."""

    def __init__(self, n: int, q: int, elements: Iterable[Mat], name: str = ""):
        self.n, self.q, self.name = n, q, name
        self.elements = tuple(elements)
        self._members = frozenset(self.elements)
        if len(self._members) != len(self.elements):
            raise ValueError(f"{name}: duplicate elements")
        self._inv: dict = {}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._members

    def mul(self, a: Mat, b: Mat) -> Mat:
        return mat_mul(a, b, self.n, self.q)

    def inverse(self, g: Mat) -> Mat:
        inv = self._inv.get(g)
        if inv is None:
            inv = self._inv[g] = mat_inv(g, self.n, self.q)
        return inv

    def is_closed(self) -> bool:
        return all(self.mul(a, b) in self for a in self.elements for b in self.elements)

    def __repr__(self):
        return f"MatrixGroup({self.name}, n={self.n}, q={self.q}, order={len(self)})"


def gl_group(n: int, q: int, limit: int = DEFAULT_LIMIT) -> MatrixGroup:
    return MatrixGroup(n, q, enumerate_gl(n, q, limit), f"GL_{n}(F_{q})")


def levi_group(n1: int, n2: int, q: int, limit: int = DEFAULT_LIMIT) -> MatrixGroup:
    g1, g2 = enumerate_gl(n1, q, limit), enumerate_gl(n2, q, limit)
    return MatrixGroup(
        n1 + n2, q, (block_diag(a, n1, b, n2) for a in g1 for b in g2), f"GL_{n1}xGL_{n2}(F_{q})"
    )


def parabolic_group(n1: int, n2: int, q: int, limit: int = DEFAULT_LIMIT) -> MatrixGroup:
    """Standard parabolic with Levi ``GL_{n1} x GL_{n2}`` (``GL_{n1}`` upper left)."""
    n = n1 + n2
    levi = levi_group(n1, n2, q, limit)
    elems = []
    for m in levi:
        for x in itertools.product(range(q), repeat=n1 * n2):
            e = list(m)
            for i in range(n1):
                for j in range(n2):
                    e[i * n + n1 + j] = x[i * n2 + j]
            elems.append(tuple(e))
    return MatrixGroup(n, q, elems, f"P_({n1},{n2})(F_{q})")


def center_group(n: int, q: int) -> MatrixGroup:
    return MatrixGroup(n, q, (scalar(c, n) for c in range(1, q)), f"Z_{n}(F_{q})")


def generated_group(n: int, q: int, generators: Sequence[Mat], name: str = "") -> MatrixGroup:
    """Closure of ``generators`` under multiplication (finite, so a group)."""
    one = identity(n)
    seen = {one}
    order = [one]
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = mat_mul(g, s, n, q)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    return MatrixGroup(n, q, sorted(order), name)


def coset_reps(sub: MatrixGroup, group: MatrixGroup) -> list[Mat]:
    """Representatives of the right cosets ``sub \\ group`` (one per class ``sub * x``)."""
    covered: set = set()
    reps = []
    for x in group:
        if x in covered:
            continue
        reps.append(x)
        coset = {group.mul(s, x) for s in sub}
        if not coset <= group._members:
            raise ValueError(f"{sub.name} is not inside {group.name}")
        covered |= coset
    if len(reps) * len(sub) != len(group):
        raise ValueError(f"coset count {len(reps)} * {len(sub)} != {len(group)}")
    return reps


# --------------------------------------------------------------------------
# the doubled field


class ToyAdeleRing:
    """``k = E`` diagonal in ``A = E x E`` with ``psi_k(x, y) = psi0(x - y)``.

    ``chi`` indexes a character of ``E^*`` valued in {+1, -1}: 0 is trivial,
    1 is the quadratic (Legendre) character for odd ``q``.  It defines
    ``eta(x, y) = chi(x / y)``, trivial on the diagonal.
    """

    def __init__(self, q: int, chi: int = 0):
        self.ring = Cyclotomics(q)
        GF(q)  # primality check
        if chi not in (0, 1) or (chi == 1 and q == 2):
            raise ValueError(f"chi index {chi} unavailable for q={q}")
        self.q = q
        self.chi_index = chi

    def psi0(self, u: int) -> Cyclotomic:
        return Cyclotomic.zeta_power(self.q, u % self.q)

    def psi(self, x: int, y: int) -> Cyclotomic:
        return self.psi0(x - y)

    def chi(self, u: int) -> int:
        u %= self.q
        if u == 0:
            raise ZeroDivisionError("chi is defined on E^*")
        if self.chi_index == 0:
            return 1
        return 1 if pow(u, (self.q - 1) // 2, self.q) == 1 else -1

    def eta(self, x: int, y: int) -> int:
        return self.chi(x * pow(y, -1, self.q))


class _Acc:
    """Accumulates ``sum value * zeta^k`` cheaply before one final reduction."""

    __slots__ = ("q", "ints", "fracs")

    def __init__(self, q: int):
        self.q = q
        self.ints = [0] * q  # integral contributions kept out of Fraction arithmetic
        self.fracs = [Fraction(0)] * q

    def add(self, value: Cyclotomic, k: int = 0):
        q = self.q
        for i, c in enumerate(value.coeffs):
            if c:
                if c.denominator == 1:
                    self.ints[(i + k) % q] += c.numerator
                else:
                    self.fracs[(i + k) % q] += c

    def result(self, divisor=1) -> Cyclotomic:
        return Cyclotomic(self.q, [a + b for a, b in zip(self.ints, self.fracs)]) / divisor


@dataclass
class AutFunction:
    """Left ``G(k)``-invariant function on ``G(A)``, stored on ``G(E)``.

    ``phi(g, h) = values[g^{-1} h]``; the map ``(g, h) -> g^{-1} h`` identifies
    ``G(k)\\G(A)`` with ``G(E)``.
    """

    base: MatrixGroup
    values: dict = field(repr=False)
    q: int
    central: bool = False

    def __call__(self, x: Pair) -> Cyclotomic:
        g, h = x
        return self.values[self.base.mul(self.base.inverse(g), h)]

    def quotient_value(self, m: Mat) -> Cyclotomic:
        return self.values[m]


def random_automorphic(base: MatrixGroup, seed: int, *, central: bool = False, span: int = 3) -> AutFunction:
    """Seeded integer-cyclotomic values on ``base(E)``, optionally centrally projected."""
    rng = random.Random(seed)
    q = base.q
    values = {g: Cyclotomic(q, [rng.randint(-span, span) for _ in range(q - 1)]) for g in base}
    phi = AutFunction(base, values, q)
    return central_projector(phi) if central else phi


def constant_automorphic(base: MatrixGroup, c=1) -> AutFunction:
    return AutFunction(base, {g: Cyclotomic(base.q, [c]) for g in base}, base.q, central=True)


def central_projector(phi: AutFunction) -> AutFunction:
    """Average over the scalars of ``Z(A)``; the result has trivial central character."""
    base, q = phi.base, phi.q
    scalars = [scalar(c, base.n) for c in range(1, q)]
    values = {}
    for g in base:
        acc = _Acc(q)
        for z in scalars:
            acc.add(phi.values[base.mul(z, g)])
        values[g] = acc.result(len(scalars))
    return AutFunction(base, values, q, central=True)


def check_left_invariance(phi: AutFunction, samples: int = 20, seed: int = 0) -> bool:
    rng = random.Random(seed)
    els = phi.base.elements
    for _ in range(samples):
        gam, g, h = rng.choice(els), rng.choice(els), rng.choice(els)
        m = phi.base.mul
        if phi((m(gam, g), m(gam, h))) != phi((g, h)):
            return False
    return True


def check_central_invariance(phi: AutFunction) -> bool:
    """Exhaustive: ``phi(z g) = phi(g)`` for every ``z`` in ``Z(A)`` and ``g`` in ``G(A)`` up to ``G(k)``."""
    base = phi.base
    one = identity(base.n)
    for z1 in range(1, phi.q):
        for z2 in range(1, phi.q):
            for h in base:
                zg = (scalar(z1, base.n), base.mul(scalar(z2, base.n), h))
                if phi(zg) != phi((one, h)):
                    return False
    return True


# --------------------------------------------------------------------------
# Fourier coefficients


def _to_fq(c, q: int) -> int:
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, q) % q


@functools.lru_cache(maxsize=256)
def unipotent_points(af: AdditiveFunction, q: int) -> tuple[tuple[Mat, int], ...]:
    """``D_F(E)`` with the value ``F(w)`` in ``F_q`` for each element ``w``.

    ``F`` is extended from the generators ``1 + X_b`` (``X_b`` a basis element
    of some ``Lie(V_i)``) along the Cayley graph.  This is the homomorphism
    that restricts to ``F`` on every ``V_i``; it need not be the entrywise
    formula once a diagonal ``V_i`` meets an earlier step (already at
    ``(3, 2)``).  :class:`NotAdditive` is raised if no homomorphism exists.
    """
    n = af.n
    gens = []
    for supp in af.domain_basis:
        e = list(identity(n))
        for r, c in supp:
            e[r * n + c] = 1
        gens.append((tuple(e), af_value(af, tuple(e), q)))
    one = identity(n)
    value = {one: 0}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for s, fs in gens:
                h = mat_mul(g, s, n, q)
                v = (value[g] + fs) % q
                old = value.get(h)
                if old is None:
                    value[h] = v
                    nxt.append(h)
                elif old != v:
                    raise NotAdditive(f"F is not a homomorphism on D_F(F_{q})")
        frontier = nxt
    if len(value) != q**af.dim:
        raise ValueError(f"|D_F(E)| = {len(value)} != q^{af.dim}")
    return tuple(sorted(value.items()))


def check_additive(af: AdditiveFunction, q: int) -> bool:
    """``F(uv) = F(u) + F(v)`` on all of ``D_F(E)``."""
    pts = unipotent_points(af, q)
    val = dict(pts)
    n = af.n
    return all(val[mat_mul(u, v, n, q)] == (fu + fv) % q for u, fu in pts for v, fv in pts)


def af_value(af: AdditiveFunction, w: Mat, q: int) -> int:
    """Entrywise reading of ``F``; a homomorphism on each abelian ``V_i``."""
    n = af.n
    one = identity(n)
    return sum(_to_fq(v, q) * (w[r * n + c] - one[r * n + c]) for r, c, v in af.support) % q


def fourier_coefficient(af: AdditiveFunction, phi: AutFunction, g: Pair) -> Cyclotomic:
    """Average over ``D_F(k)\\D_F(A)`` of ``phi(n g) psi_k^{-1}(F(n))``.

    Representatives ``n = (1, w)`` with ``w`` in ``D_F(E)``; then
    ``psi_k^{-1}(F(n)) = psi0(F(w))``.
    """
    if af.n != phi.base.n:
        raise ValueError(f"AF lives in GL_{af.n}, function on GL_{phi.base.n}")
    q = phi.q
    g1, g2 = g
    base = phi.base
    left = base.inverse(g1)
    acc = _Acc(q)
    pts = unipotent_points(af, q)
    for w, fw in pts:
        acc.add(phi.values[base.mul(left, base.mul(w, g2))], fw)
    return acc.result(len(pts))


# --------------------------------------------------------------------------
# the model for one pair


class FiniteModel:
    """Groups, towers and coset data for ``(n1, n2)`` over ``F_q``, built lazily."""

    def __init__(self, n1: int, n2: int, q: int, *, limit: int = DEFAULT_LIMIT):
        self.n1, self.n2, self.q, self.limit = n1, n2, q, limit
        self.n = n1 + n2
        if q ** (max(n1, n2) ** 2) > limit:
            raise SizeLimit(f"GL_{max(n1, n2)}(F_{q}) enumeration exceeds limit {limit}")
        self.tower: Tower = build_tower(n1, n2)

    @functools.cached_property
    def p1(self) -> MatrixGroup:
        return parabolic_group(self.n1, self.n2, self.q, self.limit)

    @functools.cached_property
    def levi(self) -> MatrixGroup:
        return levi_group(self.n1, self.n2, self.q, self.limit)

    @functools.cached_property
    def gl_first(self) -> MatrixGroup:
        return gl_group(self.n1, self.q, self.limit)

    @property
    def af(self) -> AdditiveFunction:
        return self.tower.af

    @functools.cached_property
    def af_v1(self) -> AdditiveFunction:
        s = self.tower.step(1)
        return AdditiveFunction(self.n, s.f_restriction, s.v_basis)

    @functools.cached_property
    def v_upper_basis(self) -> tuple:
        """Basis of ``Lie(V^1)``, ``V^1 = V_2 ... V_m``."""
        return tuple(b for s in self.tower.steps[1:] for b in s.v_basis)

    @functools.cached_property
    def v_upper(self) -> MatrixGroup:
        n, q = self.n, self.q
        gens = []
        for supp in self.v_upper_basis:
            e = list(identity(n))
            for r, c in supp:
                e[r * n + c] = 1
            gens.append(tuple(e))
        return generated_group(n, q, gens, "V^1")

    @functools.cached_property
    def zv_upper(self) -> MatrixGroup:
        n, q = self.n, self.q
        elems = {mat_mul(z, v, n, q) for z in center_group(n, q) for v in self.v_upper}
        return MatrixGroup(n, q, sorted(elems), "ZV^1")

    @functools.cached_property
    def f_sum_reps(self) -> list[Mat]:
        return coset_reps(self.zv_upper, self.levi)

    @functools.cached_property
    def v1_characters(self) -> list[tuple[AdditiveFunction, int]]:
        """Every character of ``V_1(E)`` as an AF, with the rank of its matrix ``S``."""
        s = self.tower.step(1)
        n1, n2, q = self.n1, self.n2, self.q
        out = []
        for entries in itertools.product(range(q), repeat=n1 * n2):
            # S is n2 x n1 and F_S(X) = tr(S X) = sum_{i,j} S[j][i] X[i][j]
            support = tuple(
                (i, n1 + j, Fraction(entries[j * n1 + i]))
                for i in range(n1)
                for j in range(n2)
                if entries[j * n1 + i]
            )
            smat = ExactMatrix([entries[j * n1 : (j + 1) * n1] for j in range(n2)], GF(q))
            out.append((AdditiveFunction(self.n, support, s.v_basis), rank(smat)))
        return out

    @functools.cached_property
    def v1_stabilizer(self) -> MatrixGroup:
        """Brute-force stabilizer of ``F|V_1`` in ``H(E)`` (the Levi part of ``P_2``)."""
        af = self.af_v1
        n, q = self.n, self.q
        pts = unipotent_points(af, q)
        stab = []
        for h in self.levi:
            hinv = self.levi.inverse(h)
            if all(af_value(af, mat_mul(mat_mul(hinv, w, n, q), h, n, q), q) == fw for w, fw in pts):
                stab.append(h)
        return MatrixGroup(n, q, stab, "Stab(F|V_1)")

    @functools.cached_property
    def prop1_reps(self) -> list[Mat]:
        return coset_reps(self.v1_stabilizer, self.levi)

    @functools.cached_property
    def unfolding_reps(self) -> list[Pair]:
        """Representatives of ``(V^1 x Z)(A)\\H(A)``."""
        n, q = self.n, self.q
        acting = [mat_mul(z, v, n, q) for z in center_group(n, q) for v in self.v_upper]
        covered: set = set()
        reps = []
        for a in self.levi:
            for b in self.levi:
                if (a, b) in covered:
                    continue
                reps.append((a, b))
                orbit = {(mat_mul(x, a, n, q), mat_mul(y, b, n, q)) for x in acting for y in acting}
                if len(orbit) != len(acting) ** 2:
                    raise ValueError("(V^1 x Z)(A) does not act freely")
                covered |= orbit
        return reps

    def random_phi(self, seed: int, central: bool = False) -> AutFunction:
        return random_automorphic(self.p1, seed, central=central)

    def p1_points(self) -> list[Pair]:
        one = identity(self.n)
        return [(one, x) for x in self.p1]


@functools.lru_cache(maxsize=16)
def finite_model(n1: int, n2: int, q: int, limit: int = DEFAULT_LIMIT) -> FiniteModel:
    return FiniteModel(n1, n2, q, limit=limit)


def diag_pair(gamma: Mat, g: Pair, n: int, q: int) -> Pair:
    """Left multiplication by the rational point ``(gamma, gamma)``."""
    return mat_mul(gamma, g[0], n, q), mat_mul(gamma, g[1], n, q)


# --------------------------------------------------------------------------
# open-orbit expansion of V_1


def f_sum(
    model: FiniteModel,
    phi: AutFunction,
    g: Pair,
    *,
    check: bool = False,
    quotient: MatrixGroup | None = None,
) -> Cyclotomic:
    """``f(phi)(g) = sum over (Z V^1)(k)\\H(k) of F(phi)(gamma g)``.

    With ``check``, every summand is compared against the other members of its
    coset and :class:`WellDefinednessFailure` is raised on any mismatch.
    ``quotient`` overrides the subgroup (only useful for negative tests).
    """
    n, q = model.n, model.q
    sub = model.zv_upper if quotient is None else quotient
    reps = model.f_sum_reps if quotient is None else coset_reps(sub, model.levi)
    total = Cyclotomic(q)
    for gam in reps:
        val = fourier_coefficient(model.af, phi, diag_pair(gam, g, n, q))
        if check:
            for u in sub:
                other = fourier_coefficient(model.af, phi, diag_pair(mat_mul(u, gam, n, q), g, n, q))
                if other != val:
                    raise WellDefinednessFailure(
                        f"summand depends on representative: gamma={gam}, u={u}, g={g}"
                    )
        total = total + val
    return total


def f_sum_table(model: FiniteModel, phi: AutFunction, *, check: bool = False) -> dict:
    """``f(phi)`` on every point of ``P_1(A)`` (exhaustive; small sizes only)."""
    els = model.p1.elements
    return {(a, b): f_sum(model, phi, (a, b), check=check) for a in els for b in els}


def check_f_sum_invariance(model: FiniteModel, phi: AutFunction, table: dict | None = None) -> bool:
    """``f(phi)(gamma g) = f(phi)(g)`` for all ``gamma`` in ``P_1(k)`` and ``g`` in ``P_1(A)``."""
    table = f_sum_table(model, phi) if table is None else table
    n, q = model.n, model.q
    for gam in model.p1:
        for g, v in table.items():
            if table[diag_pair(gam, g, n, q)] != v:
                return False
    return True


def check_f_sum_sampled(model: FiniteModel, phi: AutFunction, samples: int = 12, seed: int = 0) -> bool:
    """Seeded version of the two f(phi) checks for sizes where the full table is too big.

    Raises :class:`WellDefinednessFailure` like :func:`f_sum` with ``check``.
    """
    rng = random.Random(seed)
    els = model.p1.elements
    n, q = model.n, model.q
    for _ in range(samples):
        g = (rng.choice(els), rng.choice(els))
        gam = rng.choice(els)
        if f_sum(model, phi, g, check=True) != f_sum(model, phi, diag_pair(gam, g, n, q)):
            return False
    return True


@dataclass
class Prop1Result:
    ok: bool
    points: int
    characters: int
    cosets: int
    witness: Pair | None = None
    lhs: Cyclotomic | None = None
    rhs: Cyclotomic | None = None


def prop1_orbit_identity(model: FiniteModel, phi: AutFunction, points: Sequence[Pair] | None = None) -> Prop1Result:
    """Open-orbit part of the ``V_1`` expansion equals the ``P_2(k)\\H(k)`` coset sum."""
    n, q = model.n, model.q
    points = model.p1_points() if points is None else points
    generic = [af for af, r in model.v1_characters if r == model.n2]
    reps = model.prop1_reps
    for g in points:
        lhs = Cyclotomic(q)
        for af in generic:
            lhs = lhs + fourier_coefficient(af, phi, g)
        rhs = Cyclotomic(q)
        for gam in reps:
            rhs = rhs + fourier_coefficient(model.af_v1, phi, diag_pair(gam, g, n, q))
        if lhs != rhs:
            return Prop1Result(False, len(points), len(generic), len(reps), g, lhs, rhs)
    return Prop1Result(True, len(points), len(generic), len(reps))


def fourier_expansion(model: FiniteModel, phi: AutFunction, g: Pair) -> Cyclotomic:
    """Sum over all characters of ``V_1`` of the coefficients; equals ``phi(g)``."""
    total = Cyclotomic(model.q)
    for af, _ in model.v1_characters:
        total = total + fourier_coefficient(af, phi, g)
    return total


def function_inversion(values: dict, q: int, dim: int) -> bool:
    """Finite Fourier inversion on ``F_q^dim`` with characters ``psi0(<s, x>)``."""
    GF(q)  # q must be prime for psi0 to be a character
    pts = list(itertools.product(range(q), repeat=dim))
    coeffs = {}
    for s in pts:
        acc = _Acc(q)
        for x in pts:
            acc.add(values[x], -sum(a * b for a, b in zip(s, x)))
        coeffs[s] = acc.result(len(pts))
    for x in pts:
        acc = _Acc(q)
        for s in pts:
            acc.add(coeffs[s], sum(a * b for a, b in zip(s, x)))
        if acc.result() != values[x]:
            return False
    return True


# --------------------------------------------------------------------------
# Expectation analog (unfolding)


@dataclass
class UnfoldingResult:
    lhs: Cyclotomic
    rhs: Cyclotomic
    ratio: Cyclotomic | None
    convention: str
    passing_conventions: list[str]
    ok: bool


def smaller_tower(n1: int, n2: int, convention: str = "standard", sign: int = 1) -> Tower:
    """Tower for ``F_{n1-n2, n2}`` inside ``GL_{n1}``.

    ``standard``: ``GL_{n1-n2}`` upper left and ``GL_{n2}`` lower right.  When
    ``k_1 = 1`` this is the corner swap (the larger factor ``GL_{n2}`` ends up
    lower right); otherwise it is the plain replacement of ``n1`` by
    ``n1 - n2``.  ``mirrored`` uses the opposite corners.
    """
    a, b = n1 - n2, n2
    if convention == "mirrored":
        a, b = b, a
    elif convention != "standard":
        raise ValueError(f"unknown convention {convention!r}")
    return build_block_tower(a, b, coefficient=sign)


class _Unfolder:
    def __init__(self, model: FiniteModel, ring: ToyAdeleRing):
        self.m, self.ring = model, ring
        self.n1, self.n2, self.n, self.q = model.n1, model.n2, model.n, model.q

    def split(self, x: Mat) -> tuple[Mat, Mat]:
        n, n1 = self.n, self.n1
        return block(x, n, range(n1), range(n1)), block(x, n, range(n1, n), range(n1, n))

    def eta_factor(self, g: Pair) -> int:
        (a1, a2), (b1, b2) = self.split(g[0]), self.split(g[1])
        q, n1, n2 = self.q, self.n1, self.n2
        e1 = self.ring.eta(det(a1, n1, q), det(b1, n1, q))
        e2 = self.ring.eta(det(a2, n2, q), det(b2, n2, q))
        return e1**n2 * e2**n1  # values are +-1, so e2^(-n1) = e2^n1

    def first(self, g: Pair) -> Pair:
        return self.split(g[0])[0], self.split(g[1])[0]

    def lhs_integrand(self, phi, phi_prime, g: Pair) -> Cyclotomic:
        return phi_prime(self.first(g)) * f_sum(self.m, phi, g) * self.eta_factor(g)

    def rhs_integrand(self, phi, phi_prime, af_small, g: Pair) -> Cyclotomic:
        a = fourier_coefficient(af_small, phi_prime, self.first(g))
        if not a:
            return Cyclotomic(self.q)
        return a * fourier_coefficient(self.m.af, phi, g) * self.eta_factor(g)


def _check_rhs_invariance(u: _Unfolder, phi, phi_prime, af_small, samples: int = 6, seed: int = 0):
    """Spot-check ``(V^1 x Z)(A)``-invariance of the right-hand integrand; return a witness or None."""
    m, n, q = u.m, u.n, u.q
    rng = random.Random(seed)
    reps = m.unfolding_reps
    pts = rng.sample(reps, min(samples, len(reps)))
    one = identity(n)
    movers = [(v, one) for v in m.v_upper] + [(one, v) for v in m.v_upper]
    movers += [(scalar(a, n), scalar(b, n)) for a in range(1, q) for b in range(1, q)]
    for g in pts:
        base = u.rhs_integrand(phi, phi_prime, af_small, g)
        for x, y in movers:
            h = (mat_mul(x, g[0], n, q), mat_mul(y, g[1], n, q))
            if u.rhs_integrand(phi, phi_prime, af_small, h) != base:
                return (x, y), g
    return None


def _check_lhs_invariance(u: _Unfolder, phi, phi_prime, samples: int = 4, seed: int = 0):
    m, n, q = u.m, u.n, u.q
    rng = random.Random(seed)
    els = m.levi.elements
    for _ in range(samples):
        g = (rng.choice(els), rng.choice(els))
        base = u.lhs_integrand(phi, phi_prime, g)
        gam = rng.choice(els)
        za, zb = rng.randrange(1, q), rng.randrange(1, q)
        for h in (
            diag_pair(gam, g, n, q),
            (mat_mul(scalar(za, n), g[0], n, q), mat_mul(scalar(zb, n), g[1], n, q)),
        ):
            if u.lhs_integrand(phi, phi_prime, h) != base:
                return h, g
    return None


def unfolding_sides(model: FiniteModel, ring: ToyAdeleRing, phi, phi_prime, af_small) -> tuple[Cyclotomic, Cyclotomic]:
    u = _Unfolder(model, ring)
    q, n = model.q, model.n
    one = identity(n)
    lhs = Cyclotomic(q)
    for x in model.levi:
        lhs = lhs + u.lhs_integrand(phi, phi_prime, (one, x))
    lhs = lhs / (q - 1)
    d = len(model.v_upper_basis)
    rhs = Cyclotomic(q)
    for g in model.unfolding_reps:
        rhs = rhs + u.rhs_integrand(phi, phi_prime, af_small, g)
    return lhs, rhs * q**d


CONVENTIONS = (("standard", 1), ("standard", -1), ("mirrored", 1), ("mirrored", -1))


def unfolding_check(
    n1: int,
    n2: int,
    q: int,
    chi: int,
    phi: AutFunction,
    phi_prime: AutFunction,
    *,
    limit: int = DEFAULT_LIMIT,
) -> UnfoldingResult:
    """Both sides of the unfolding identity, exactly.

    Left: ``phi'(g1) f(phi)(diag(g1, g2)) eta`` over ``H(k)Z(A)\\H(A)``.
    Right: ``F_{n1-n2,n2}(phi')(g1) F_{n1,n2}(phi)(diag(g1, g2)) eta`` over
    ``(V^1 x Z)(A)\\H(A)``.  Each realisation of ``F_{n1-n2,n2}`` in
    :data:`CONVENTIONS` whose right-hand integrand is ``(V^1 x Z)(A)``-invariant
    is evaluated; the first is reported.  :class:`IntegrandNotInvariant` is
    raised if none qualifies or the left integrand is not invariant.
    """
    model = finite_model(n1, n2, q, limit)
    ring = ToyAdeleRing(q, chi)
    u = _Unfolder(model, ring)
    bad = _check_lhs_invariance(u, phi, phi_prime)
    if bad is not None:
        raise IntegrandNotInvariant(f"left integrand not invariant at {bad}")
    passing = []
    chosen = None
    for conv, sign in CONVENTIONS:
        name = f"{conv}{'+' if sign > 0 else '-'}"
        af_small = smaller_tower(n1, n2, conv, sign).af
        if _check_rhs_invariance(u, phi, phi_prime, af_small) is None:
            passing.append(name)
            if chosen is None:
                chosen = (name, af_small)
    if chosen is None:
        raise IntegrandNotInvariant("no realisation of F_{n1-n2,n2} gives an invariant integrand")
    lhs, rhs = unfolding_sides(model, ring, phi, phi_prime, chosen[1])
    ratio = lhs / rhs if rhs else None
    return UnfoldingResult(lhs, rhs, ratio, chosen[0], passing, lhs == rhs)
