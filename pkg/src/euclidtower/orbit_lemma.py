"""Three independent computations of the orbit attached to ``F_{n1,n2}``.

For each coprime pair we compare

1. the Jordan type of the matrix ``J`` built from the tower (rank of powers),
2. the closed-form partition read off the division chain, and
3. the Richardson orbit of the parabolic with Levi ``GL_{n_{s+1}}^{k_s+1} x ... x GL_{n_2}^{k_1}``,

and check ``dim O = 2 dim D_F``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .euclid_partitions import (
    Partition,
    claimed_partition,
    coprime_pairs,
    euclid_chain,
    levi_blocks,
    orbit_dim,
    richardson_partition,
)
from .exact_linalg import ExactMatrix, matmul, rank
from .tower import build_tower, dim_df, lemma_j_matrix, verify_open_orbit, verify_stabilizer_bullet


class NotNilpotent(ValueError):
    pass


def jordan_type(m: ExactMatrix) -> Partition:
    """Jordan type of a nilpotent matrix from the ranks of its powers.

    The number of blocks of size ``>= j`` is ``rank(m^(j-1)) - rank(m^j)``.
    """
    n = m.rows
    if n != m.cols:
        raise ValueError("jordan_type needs a square matrix")
    ranks = [n]
    power = m
    for _ in range(n):
        ranks.append(rank(power))
        if ranks[-1] == 0:
            break
        power = matmul(power, m)
    if ranks[-1] != 0:
        raise NotNilpotent("m^n != 0")
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))] + [0]
    parts = []
    for j in range(1, len(at_least)):
        parts.extend([j] * (at_least[j - 1] - at_least[j]))
    return Partition.from_parts(parts)


@dataclass
class LemmaReport:
    pair: tuple[int, int]
    jordan_type_of_J: Partition | None = None
    claimed: Partition | None = None
    richardson: Partition | None = None
    dim_orbit: int | None = None
    dim_df: int | None = None
    all_bullets_ok: bool = False
    verdict: bool = False
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def part(p):
            return None if p is None else p.tolist()

        return {
            "pair": list(self.pair),
            "jordan_type_of_J": part(self.jordan_type_of_J),
            "claimed": part(self.claimed),
            "richardson": part(self.richardson),
            "dim_orbit": self.dim_orbit,
            "dim_df": self.dim_df,
            "all_bullets_ok": self.all_bullets_ok,
            "verdict": self.verdict,
            "diagnostics": list(self.diagnostics),
        }


def verify_lemma(n1: int, n2: int, *, check_bullets: bool = True) -> LemmaReport:
    """Build everything for ``(n1, n2)`` and compare; never raises on math failures."""
    report = LemmaReport((n1, n2))
    try:
        chain = euclid_chain(n1, n2)
        report.claimed = claimed_partition(chain)
        report.richardson = richardson_partition(levi_blocks(chain))
        report.dim_orbit = orbit_dim(report.claimed)
        tower = build_tower(n1, n2, verify=False)
        report.dim_df = dim_df(tower)
        report.jordan_type_of_J = jordan_type(lemma_j_matrix(tower))
        if check_bullets:
            ok = True
            for i in range(1, len(tower) + 1):
                o = verify_open_orbit(tower, i)
                if not o.ok:
                    ok = False
                    report.diagnostics.append(f"orbit at step {i} not open: {o}")
                if i < len(tower):
                    b = verify_stabilizer_bullet(tower, i)
                    if not b.ok:
                        ok = False
                        report.diagnostics.append(f"stabilizer bullet fails at step {i}: {b}")
            report.all_bullets_ok = ok
        else:
            report.all_bullets_ok = True
            report.diagnostics.append("bullets not checked")
    except Exception as exc:  # reports are total: failures become diagnostics
        report.diagnostics.append(f"{type(exc).__name__}: {exc}")
        report.verdict = False
        return report
    same = report.jordan_type_of_J == report.claimed == report.richardson
    if not same:
        report.diagnostics.append("partitions disagree")
    if report.dim_orbit != 2 * report.dim_df:
        report.diagnostics.append(f"dim orbit {report.dim_orbit} != 2 * {report.dim_df}")
    report.verdict = same and report.dim_orbit == 2 * report.dim_df and report.all_bullets_ok
    return report


def _verify_pair(pair):
    return verify_lemma(*pair)


def scan_verify(max_n: int, *, workers: int | None = None) -> list[LemmaReport]:
    """Reports for all coprime pairs with ``n1 + n2 <= max_n``, in lexicographic order."""
    if max_n < 3:
        raise ValueError("max_n must be at least 3")
    pairs = coprime_pairs(max_n)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify_pair, pairs))
    return [verify_lemma(*p) for p in pairs]
