"""Euclidean division chains, partitions and the two closed-form orbits.

For coprime ``n1 > n2`` the chain records every division
``n_i = n_{i+1} k_i + n_{i+2}`` down to remainder zero.  From it we read off

* the partition ``[(K_s + 1)^{n_{s+1}}, K_{s-1}^{n_s - n_{s+1}}, ..., K_1^{n_2 - n_3}]``
  with ``K_j = k_1 + ... + k_j`` (:func:`claimed_partition`), and
* the Levi block sizes ``n_{s+1}^{k_s+1}, n_s^{k_{s-1}}, ..., n_2^{k_1}`` whose
  Richardson orbit should be the same partition (:func:`levi_blocks`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class InvalidPair(ValueError):
    pass


class NotCoprime(ValueError):
    pass


@dataclass(frozen=True)
class DivisionChain:
    """Remainders ``n_1 ... n_{s+2}`` and quotients ``k_1 ... k_s``."""

    n1: int
    n2: int
    remainders: tuple[int, ...]
    quotients: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.quotients)

    @property
    def steps(self) -> int:
        """Length of the subtraction-only descent, ``k_1 + ... + k_s``."""
        return sum(self.quotients)

    def n(self, i: int) -> int:
        """1-based remainder ``n_i``."""
        return self.remainders[i - 1]

    def k(self, i: int) -> int:
        """1-based quotient ``k_i``."""
        return self.quotients[i - 1]

    def reconstruct(self) -> tuple[int, int]:
        """Rebuild ``(n1, n2)`` bottom-up from the quotients alone."""
        lo, hi = 0, 1
        for k in reversed(self.quotients):
            lo, hi = hi, hi * k + lo
        return hi, lo

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "s": self.s,
            "remainders": list(self.remainders),
            "quotients": list(self.quotients),
        }


def euclid_chain(n1: int, n2: int, *, allow_equal: bool = False) -> DivisionChain:
    """Run the Euclidean algorithm on ``(n1, n2)``.

    ``allow_equal`` admits the degenerate pair ``(1, 1)`` (one division with
    quotient 1), which shows up when a smaller tower is derived from ``(2, 1)``.
    """
    if n2 < 1 or n1 < n2 or (n1 == n2 and not allow_equal):
        raise InvalidPair(f"need n1 > n2 >= 1, got ({n1}, {n2})")
    rem = [n1, n2]
    quo = []
    while rem[-1] != 0:
        q, r = divmod(rem[-2], rem[-1])
        quo.append(q)
        rem.append(r)
    if rem[-2] != 1:
        raise NotCoprime(f"gcd({n1}, {n2}) = {rem[-2]} != 1")
    return DivisionChain(n1, n2, tuple(rem), tuple(quo))


def slow_euclid_pairs(chain: DivisionChain) -> list[tuple[int, int]]:
    """Subtraction-only Euclid: replace the larger entry by the difference.

    The position of each entry is preserved, so ``(3, 2)`` goes to ``(1, 2)``
    and then ``(1, 1)``.  The list has ``k_1 + ... + k_s`` entries and ends at
    ``(1, 1)``.
    """
    a, b = chain.n1, chain.n2
    pairs = [(a, b)]
    while (a, b) != (1, 1):
        if a > b:
            a -= b
        else:
            b -= a
        pairs.append((a, b))
    assert len(pairs) == chain.steps
    return pairs


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, parts) -> Partition:
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def transpose(self) -> Partition:
        return transpose(self)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "[" + ",".join(map(str, self.parts)) + "]"

    def tolist(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True)
class Composition:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks or any(b <= 0 for b in blocks):
            raise ValueError(f"blocks must be positive and nonempty: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(self.blocks)

    def tolist(self) -> list[int]:
        return list(self.blocks)


def transpose(p: Partition) -> Partition:
    if not p.parts:
        return Partition(())
    return Partition(tuple(sum(1 for x in p.parts if x >= j) for j in range(1, p.parts[0] + 1)))


def orbit_dim(p: Partition) -> int:
    """Dimension of the nilpotent orbit of Jordan type ``p`` in gl_n."""
    return p.n**2 - sum(c * c for c in transpose(p).parts)


def claimed_partition(chain: DivisionChain) -> Partition:
    s = chain.s
    parts: list[int] = []
    for j in range(s, 0, -1):
        value = sum(chain.quotients[:j]) + (1 if j == s else 0)
        mult = chain.n(j + 1) - chain.n(j + 2)
        parts.extend([value] * mult)
    return Partition.from_parts(parts)


def levi_blocks(chain: DivisionChain) -> Composition:
    s = chain.s
    blocks = [chain.n(s + 1)] * (chain.k(s) + 1)
    for j in range(s, 1, -1):
        blocks.extend([chain.n(j)] * chain.k(j - 1))
    return Composition(tuple(blocks))


def richardson_partition(blocks: Composition) -> Partition:
    """Richardson orbit of a GL_n parabolic: transpose of the sorted blocks."""
    return transpose(Partition.from_parts(blocks.blocks))


def coprime_pairs(max_n: int) -> list[tuple[int, int]]:
    """Coprime ``(n1, n2)`` with ``n1 > n2 >= 1`` and ``n1 + n2 <= max_n``, lexicographic."""
    return [
        (n1, n2)
        for n1 in range(2, max_n)
        for n2 in range(1, n1)
        if n1 + n2 <= max_n and gcd(n1, n2) == 1
    ]
