import pytest

from euclidtower.euclid_partitions import Partition
from euclidtower.exact_linalg import ExactMatrix, inverse, jordan_block, matmul, random_invertible
from euclidtower.orbit_lemma import NotNilpotent, jordan_type, scan_verify, verify_lemma


def direct_sum(*blocks):
    n = sum(b.rows for b in blocks)
    entries, off = {}, 0
    for b in blocks:
        for (r, c), v in b.nonzero().items():
            entries[(r + off, c + off)] = v
        off += b.rows
    return ExactMatrix.from_entries(n, entries)


def test_jordan_type_of_blocks():
    m = direct_sum(jordan_block(3), jordan_block(1), jordan_block(2))
    assert jordan_type(m) == Partition((3, 2, 1))
    assert jordan_type(ExactMatrix.zeros(3)) == Partition((1, 1, 1))


@pytest.mark.parametrize("seed", range(5))
def test_jordan_type_conjugation_invariant(seed):
    m = direct_sum(jordan_block(4), jordan_block(2), jordan_block(2))
    g = random_invertible(8, seed)
    assert jordan_type(matmul(matmul(g, m), inverse(g))) == Partition((4, 2, 2))


def test_not_nilpotent():
    with pytest.raises(NotNilpotent):
        jordan_type(ExactMatrix.identity(2))


@pytest.mark.parametrize(
    "pair,parts,dim",
    [((2, 1), [3], 6), ((3, 2), [4, 1], 18), ((5, 3), [5, 2, 1], 48), ((8, 5), [6, 3, 2, 1, 1], 128)],
)
def test_verify_lemma_anchors(pair, parts, dim):
    rep = verify_lemma(*pair)
    assert rep.verdict, rep.diagnostics
    assert rep.jordan_type_of_J.tolist() == parts
    assert rep.dim_orbit == dim == 2 * rep.dim_df


def test_verify_lemma_reports_bad_input():
    rep = verify_lemma(6, 4)
    assert not rep.verdict
    assert "NotCoprime" in rep.diagnostics[0]


def test_scan_order_and_workers():
    assert [r.pair for r in scan_verify(5)] == [(2, 1), (3, 1), (3, 2), (4, 1)]
    serial = [r.to_dict() for r in scan_verify(7)]
    parallel = [r.to_dict() for r in scan_verify(7, workers=2)]
    assert serial == parallel
    with pytest.raises(ValueError):
        scan_verify(2)
