"""The tower of parabolics ``P_i`` and the additive function ``F_{n1,n2}``.

A step of the tower is a parabolic of some ``GL_{a+b}`` with Levi
``GL_a x GL_b``, sitting inside ``GL_n`` (``n = n1 + n2``) through a diagonal
embedding: ``GL_a`` acts simultaneously on several index tuples (its *copies*),
and so does ``GL_b``.  The unipotent radical ``V_i`` is the ``a x b`` Hom block,
realised on a list of (first-copy, second-copy) pairs.  Step 1 is the standard
``(n1, n2)`` parabolic with ``GL_{n1}`` in the upper left corner.

The generic character of ``V_i`` reads an identity sub-block of the Hom
block: the lowest ``b`` rows when ``a > b``, the first ``a`` columns when
``a < b``.  Its stabilizer in the Levi is again a parabolic, now for the pair
``(a - b, b)`` or ``(a, b - a)`` (the subtraction-only Euclid step), and the
shared factor picks up extra diagonal copies.  For ``i >= 3`` this means
``V_i`` is in general *not* a coordinate subgroup: its Lie algebra is spanned
by sums of elementary matrices with disjoint supports.

Positions are 0-based ``(row, col)`` pairs throughout the Python API; step
indices are 1-based so that ``t.step(1)`` is ``V_1``.  JSON output uses
1-based positions.

All bullet checks (open orbit, stabilizer equals ``P_{i+1} V_i``) are computed
from scratch with exact kernels, independent of the construction above.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .euclid_partitions import DivisionChain, euclid_chain
from .exact_linalg import QQ, ExactMatrix, kernel_basis, sparse_rank

Pos = tuple[int, int]
LieElt = dict  # {(row, col): coefficient}


class ConstructionFailure(RuntimeError):
    pass


class NormalizationFailure(RuntimeError):
    pass


# --------------------------------------------------------------------------
# sparse Lie algebra helpers


def bracket(x: LieElt, y: LieElt) -> LieElt:
    """``xy - yx`` for sparse matrices."""
    out: dict = {}
    y_rows: dict = {}
    for (r, c), v in y.items():
        y_rows.setdefault(r, []).append((c, v))
    x_rows: dict = {}
    for (r, c), v in x.items():
        x_rows.setdefault(r, []).append((c, v))
    for (r, m), v in x.items():
        for c, w in y_rows.get(m, ()):
            out[(r, c)] = out.get((r, c), 0) + v * w
    for (r, m), v in y.items():
        for c, w in x_rows.get(m, ()):
            out[(r, c)] = out.get((r, c), 0) - v * w
    return {k: v for k, v in out.items() if v}


def _basis_elt(positions: Iterable[Pos]) -> LieElt:
    return {p: 1 for p in positions}


def coordinate_index(basis: Iterable[tuple[Pos, ...]]) -> dict | None:
    """Map position -> basis id when the supports are pairwise disjoint, else None."""
    index: dict = {}
    for k, supp in enumerate(basis):
        for p in supp:
            if p in index:
                return None
            index[p] = k
    return index


def in_coordinate_span(x: LieElt, basis: list[tuple[Pos, ...]], index: dict) -> bool:
    """Exact membership of ``x`` in the span of disjoint 0/1 basis elements."""
    coeff: dict = {}
    for p, v in x.items():
        k = index.get(p)
        if k is None:
            return False
        if coeff.setdefault(k, v) != v:
            return False
    return all(all(x.get(p, 0) == coeff[k] for p in basis[k]) for k in coeff)


# --------------------------------------------------------------------------
# data types


def _fmt_coeff(c: Fraction):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else str(c)


@dataclass(frozen=True)
class AdditiveFunction:
    """Linear functional ``X -> sum coeff * X[pos]`` on the Lie algebra of its domain.

    ``domain_basis`` spans ``Lie(D_F)``; each element is a tuple of positions
    standing for the sum of the corresponding elementary matrices.
    """

    n: int
    support: tuple[tuple[int, int, Fraction], ...]
    domain_basis: tuple[tuple[Pos, ...], ...]

    def __call__(self, x) -> Fraction:
        if isinstance(x, ExactMatrix):
            return sum((Fraction(c) * x[r, k] for r, k, c in self.support), Fraction(0))
        return sum((Fraction(c) * x.get((r, k), 0) for r, k, c in self.support), Fraction(0))

    @property
    def dim(self) -> int:
        return len(self.domain_basis)

    def positions(self) -> set[Pos]:
        return {p for b in self.domain_basis for p in b}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "support": [[r + 1, c + 1, _fmt_coeff(v)] for r, c, v in self.support],
            "domain_basis": [[[r + 1, c + 1] for r, c in b] for b in self.domain_basis],
        }


@dataclass(frozen=True)
class TowerStep:
    index: int
    pair: tuple[int, int]
    first_copies: tuple[tuple[int, ...], ...]
    second_copies: tuple[tuple[int, ...], ...]
    hom_copies: tuple[tuple[int, int], ...]
    f_restriction: tuple[tuple[int, int, Fraction], ...]

    @property
    def v_basis(self) -> tuple[tuple[Pos, ...], ...]:
        a, b = self.pair
        return tuple(
            tuple(
                (self.first_copies[x][r], self.second_copies[y][c]) for x, y in self.hom_copies
            )
            for r in range(a)
            for c in range(b)
        )

    @property
    def levi_basis(self) -> tuple[tuple[Pos, ...], ...]:
        out = []
        for copies in (self.first_copies, self.second_copies):
            m = len(copies[0])
            for r in range(m):
                for c in range(m):
                    out.append(tuple((cp[r], cp[c]) for cp in copies))
        return tuple(out)

    @property
    def p_lie_basis(self) -> tuple[tuple[Pos, ...], ...]:
        return self.levi_basis + self.v_basis

    @property
    def dim_v(self) -> int:
        return self.pair[0] * self.pair[1]

    def f(self, x: LieElt) -> Fraction:
        return sum((Fraction(c) * x.get((r, k), 0) for r, k, c in self.f_restriction), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "pair": list(self.pair),
            "v_basis": [[[r + 1, c + 1] for r, c in b] for b in self.v_basis],
            "f_support": [[r + 1, c + 1, _fmt_coeff(v)] for r, c, v in self.f_restriction],
        }


@dataclass(frozen=True)
class Tower:
    """Tower for blocks ``(n1, n2)``: ``GL_{n1}`` upper left, ``GL_{n2}`` lower right."""

    n1: int
    n2: int
    chain: DivisionChain
    steps: tuple[TowerStep, ...]
    af: AdditiveFunction = field(repr=False)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def step(self, i: int) -> TowerStep:
        return self.steps[i - 1]

    def __len__(self):
        return len(self.steps)

    def to_dict(self) -> dict:
        return {
            "pair": [self.n1, self.n2],
            "chain": self.chain.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
            "af": self.af.to_dict(),
            "dim_df": dim_df(self),
        }


# --------------------------------------------------------------------------
# construction


def _generic_reading(a: int, b: int) -> list[Pos]:
    """Hom-block coordinates read by the chosen open-orbit character."""
    if a > b:
        return [(a - b + j, j) for j in range(b)]
    if a < b:
        return [(j, j) for j in range(a)]
    return [(0, 0)]


def _descend(a, b, first, second):
    """Levi stabilizer of the generic character, as the next step's data."""
    if a > b:
        # g_first = [[A, B], [0, g_second]]: new pair (a - b, b)
        new_first = [x[: a - b] for x in first]
        new_second = [x[a - b :] for x in first] + list(second)
        hom = [(i, i) for i in range(len(first))]
        return a - b, b, new_first, new_second, hom
    # g_second = [[g_first, C], [0, D]]: new pair (a, b - a)
    new_first = list(first) + [y[:a] for y in second]
    new_second = [y[a:] for y in second]
    hom = [(len(first) + j, j) for j in range(len(second))]
    return a, b - a, new_first, new_second, hom


def _raw_steps(n1: int, n2: int, coefficient) -> list[TowerStep]:
    a, b = n1, n2
    first = [tuple(range(n1))]
    second = [tuple(range(n1, n1 + n2))]
    hom = [(0, 0)]
    steps = []
    while True:
        f = []
        for r, c in _generic_reading(a, b):
            pos = min((first[x][r], second[y][c]) for x, y in hom)
            f.append((pos[0], pos[1], Fraction(coefficient)))
        steps.append(
            TowerStep(
                index=len(steps) + 1,
                pair=(a, b),
                first_copies=tuple(first),
                second_copies=tuple(second),
                hom_copies=tuple(hom),
                f_restriction=tuple(sorted(f)),
            )
        )
        if a == b:
            return steps
        a, b, first, second, hom = _descend(a, b, first, second)


def _assemble(n1, n2, chain, steps) -> Tower:
    af = AdditiveFunction(
        n=n1 + n2,
        support=tuple(t for s in steps for t in s.f_restriction),
        domain_basis=tuple(v for s in steps for v in s.v_basis),
    )
    return Tower(n1, n2, chain, tuple(steps), af)


def build_block_tower(upper: int, lower: int, *, coefficient=1, verify: bool = True) -> Tower:
    """Tower with ``GL_upper`` in the upper left and ``GL_lower`` in the lower right.

    Either block may be the larger one; ``(1, 1)`` is allowed.
    """
    big, small = max(upper, lower), min(upper, lower)
    chain = euclid_chain(big, small, allow_equal=True)
    tower = _assemble(upper, lower, chain, _raw_steps(upper, lower, coefficient))
    if len(tower.steps) != chain.steps:
        raise ConstructionFailure(f"{len(tower.steps)} steps, expected {chain.steps}")
    if verify:
        _verify_or_raise(tower)
    return tower


def build_tower(n1: int, n2: int, *, allow_equal: bool = False, coefficient=1, verify: bool = True) -> Tower:
    """Build and (by default) verify the tower for coprime ``n1 > n2 >= 1``."""
    euclid_chain(n1, n2, allow_equal=allow_equal)
    return build_block_tower(n1, n2, coefficient=coefficient, verify=verify)


def _verify_or_raise(tower: Tower) -> None:
    problems = check_tower_invariants(tower)
    for i in range(1, len(tower) + 1):
        rep = verify_open_orbit(tower, i)
        if not rep.ok:
            problems.append(f"step {i}: orbit not open ({rep})")
        if i < len(tower):
            rep2 = verify_stabilizer_bullet(tower, i)
            if not rep2.ok:
                problems.append(f"step {i}: stabilizer mismatch ({rep2})")
    if problems:
        raise ConstructionFailure(f"tower ({tower.n1},{tower.n2}): " + "; ".join(problems))


def conjugate_tower(tower: Tower, perm: list[int]) -> Tower:
    """Relabel indices by ``i -> perm[i]`` (conjugation by a permutation matrix)."""
    def mv(t):
        return tuple(perm[i] for i in t)

    steps = [
        replace(
            s,
            first_copies=tuple(mv(c) for c in s.first_copies),
            second_copies=tuple(mv(c) for c in s.second_copies),
            f_restriction=tuple((perm[r], perm[c], v) for r, c, v in s.f_restriction),
        )
        for s in tower.steps
    ]
    return _assemble(tower.n1, tower.n2, tower.chain, steps)


def with_step_character(tower: Tower, i: int, f_restriction) -> Tower:
    """Copy of ``tower`` with the character on ``V_i`` replaced (for negative checks)."""
    steps = list(tower.steps)
    steps[i - 1] = replace(steps[i - 1], f_restriction=tuple(f_restriction))
    return _assemble(tower.n1, tower.n2, tower.chain, steps)


# --------------------------------------------------------------------------
# checks


def check_tower_invariants(tower: Tower) -> list[str]:
    """Entry-disjointness, abelian ``V_i`` of the right size, closure of ``Lie(D_F)``."""
    problems = []
    seen: dict = {}
    for s in tower.steps:
        if len(s.v_basis) != s.pair[0] * s.pair[1]:
            problems.append(f"step {s.index}: dim V = {len(s.v_basis)} != {s.pair[0] * s.pair[1]}")
        for b in s.v_basis:
            for p in b:
                if p in seen and seen[p] != s.index:
                    problems.append(f"position {p} in V_{seen[p]} and V_{s.index}")
                seen[p] = s.index
        elts = [_basis_elt(b) for b in s.v_basis]
        if any(bracket(x, y) for x in elts for y in elts):
            problems.append(f"step {s.index}: V not abelian")
    basis = list(tower.af.domain_basis)
    index = coordinate_index(basis)
    if index is None:
        problems.append("Lie(D_F) basis supports overlap")
        return problems
    elts = [_basis_elt(b) for b in basis]
    for i, x in enumerate(elts):
        for y in elts[i + 1 :]:
            z = bracket(x, y)
            if z and not in_coordinate_span(z, basis, index):
                problems.append("Lie(D_F) not closed under bracket")
                return problems
    for r, c, _ in tower.af.support:
        if (r, c) not in index:
            problems.append(f"F reads {(r, c)} outside D_F")
    return problems


@dataclass(frozen=True)
class Stabilizer:
    p_basis: tuple[tuple[Pos, ...], ...]
    vectors: tuple[LieElt, ...] = field(repr=False)
    dim_p: int
    dim_characters: int
    rank: int

    @property
    def dim(self) -> int:
        return len(self.vectors)


@functools.lru_cache(maxsize=4096)
def lie_stabilizer(step: TowerStep) -> Stabilizer:
    """Stabilizer in ``Lie(P_i)`` of the character ``F|V_i``.

    Kernel of ``X -> (v -> F([X, v]))`` on ``Lie(P_i)``, computed exactly.
    """
    p_basis = step.p_lie_basis
    v_elts = [_basis_elt(b) for b in step.v_basis]
    rows = []
    for v in v_elts:
        rows.append([step.f(bracket(_basis_elt(x), v)) for x in p_basis])
    m = ExactMatrix(rows, QQ, cols=len(p_basis))
    ker = kernel_basis(m)
    vectors = []
    for vec in ker:
        elt: dict = {}
        for coef, supp in zip(vec, p_basis):
            if coef:
                for p in supp:
                    elt[p] = elt.get(p, 0) + coef
        vectors.append({k: v for k, v in elt.items() if v})
    return Stabilizer(p_basis, tuple(vectors), len(p_basis), len(v_elts), len(p_basis) - len(ker))


@dataclass(frozen=True)
class OrbitCheck:
    step: int
    dim_p: int
    dim_stabilizer: int
    dim_characters: int
    ok: bool


@dataclass(frozen=True)
class BulletCheck:
    step: int
    dim_stabilizer: int
    dim_expected: int
    contained: bool
    ok: bool


def verify_open_orbit(tower: Tower, i: int) -> OrbitCheck:
    """Open ``P_i``-orbit iff the stabilizer has codimension ``dim V_i``."""
    st = lie_stabilizer(tower.step(i))
    codim = st.dim_p - st.dim
    return OrbitCheck(i, st.dim_p, st.dim, st.dim_characters, codim == st.dim_characters)


def verify_stabilizer_bullet(tower: Tower, i: int) -> BulletCheck:
    """Exact span comparison: stabilizer of ``F|V_i`` vs ``Lie(P_{i+1}) + Lie(V_i)``."""
    if not 1 <= i < len(tower):
        raise IndexError(f"bullet needs 1 <= i < {len(tower)}, got {i}")
    st = lie_stabilizer(tower.step(i))
    target = list(tower.step(i + 1).p_lie_basis) + list(tower.step(i).v_basis)
    index = coordinate_index(target)
    if index is not None:
        contained = all(in_coordinate_span(x, target, index) for x in st.vectors)
        dim_target = len(target)
    else:
        vecs = [_basis_elt(b) for b in target]
        dim_target = sparse_rank(vecs)
        contained = sparse_rank(vecs + list(st.vectors)) == dim_target
    return BulletCheck(i, st.dim, dim_target, contained, contained and st.dim == dim_target)


# --------------------------------------------------------------------------
# J_F, J_i, J


def af_dual_matrix(tower: Tower) -> ExactMatrix:
    """``J_F`` with ``F(X) = tr(J_F X^t)`` on ``Lie(D_F)``.

    Also checks that every projection of ``J_F`` to ``Lie(V_i)`` is upper
    triangular with at most one nonzero entry per row and column, i.e. a
    Weyl conjugate of a nilpotent Jordan matrix up to a diagonal rescaling.
    """
    jf = {}
    for r, c, v in tower.af.support:
        jf[(r, c)] = jf.get((r, c), 0) + Fraction(v)
    for s in tower.steps:
        proj = project(jf, s.v_basis)
        if any(r >= c for r, c in proj):
            raise NormalizationFailure(f"step {s.index}: projection not strictly upper triangular")
        rows = [r for r, _ in proj]
        cols = [c for _, c in proj]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise NormalizationFailure(f"step {s.index}: projection is not a Weyl-Jordan pattern")
    return ExactMatrix.from_entries(tower.n, jf)


def project(x: LieElt, basis: Iterable[tuple[Pos, ...]]) -> LieElt:
    """Orthogonal projection for ``<X, Y> = tr(X Y^t)`` onto a disjoint 0/1 basis."""
    out = {}
    for supp in basis:
        coef = sum((Fraction(x.get(p, 0)) for p in supp), Fraction(0)) / len(supp)
        if coef:
            for p in supp:
                out[p] = coef
    return out


def lemma_j_matrix(tower: Tower) -> ExactMatrix:
    """``J = J_1 + ... + J_m``.

    ``J_i`` is the projection of ``J_F`` to ``Lie(V_i)`` with every diagonal
    copy of an entry dropped except the copy in the smallest row.
    """
    jf = af_dual_matrix(tower).nonzero()
    j: dict = {}
    for s in tower.steps:
        for supp in s.v_basis:
            proj = project(jf, [supp])
            if proj:
                keep = min(proj)
                j[keep] = j.get(keep, 0) + proj[keep]
    return ExactMatrix.from_entries(tower.n, j)


def dim_df(tower: Tower) -> int:
    return sum(len(s.v_basis) for s in tower.steps)
