from fractions import Fraction

import pytest

from euclidtower.euclid_partitions import coprime_pairs
from euclidtower.exact_linalg import ExactMatrix
from euclidtower.tower import (
    ConstructionFailure,
    af_dual_matrix,
    build_block_tower,
    build_tower,
    check_tower_invariants,
    conjugate_tower,
    dim_df,
    lemma_j_matrix,
    verify_open_orbit,
    verify_stabilizer_bullet,
    with_step_character,
)
from euclidtower.tower import _verify_or_raise

SMALL = coprime_pairs(10)


def positions(step):
    return sorted(p for b in step.v_basis for p in b)


def test_tower_2_1():
    t = build_tower(2, 1)
    assert len(t) == 2
    assert positions(t.step(1)) == [(0, 2), (1, 2)]
    assert positions(t.step(2)) == [(0, 1)]
    assert sorted((r, c) for r, c, _ in t.af.support) == [(0, 1), (1, 2)]


def test_tower_3_2_has_diagonal_last_step():
    t = build_tower(3, 2)
    assert [s.pair for s in t.steps] == [(3, 2), (1, 2), (1, 1)]
    assert [len(s.v_basis) for s in t.steps] == [6, 2, 1]
    assert t.step(3).v_basis == (((1, 2), (3, 4)),)
    assert dim_df(t) == 9


@pytest.mark.parametrize("n1", range(2, 9))
def test_whittaker_towers(n1):
    n = n1 + 1
    t = build_tower(n1, 1)
    upper = sorted((r, c) for r in range(n) for c in range(r + 1, n))
    assert sorted(t.af.positions()) == upper
    assert sorted(t.af.support) == [(i, i + 1, Fraction(1)) for i in range(n - 1)]
    assert all(len(b) == 1 for b in t.af.domain_basis)


@pytest.mark.parametrize("pair", SMALL)
def test_bullets(pair):
    t = build_tower(*pair)
    assert check_tower_invariants(t) == []
    for i in range(1, len(t) + 1):
        assert verify_open_orbit(t, i).ok
        if i < len(t):
            assert verify_stabilizer_bullet(t, i).ok


def test_orbit_check_numbers_2_1():
    o = verify_open_orbit(build_tower(2, 1), 1)
    # Lie(P_1) = gl_2 + gl_1 + Hom, 4 + 1 + 2; two characters cut it to 5
    assert (o.dim_p, o.dim_stabilizer, o.dim_characters) == (7, 5, 2)


def test_zero_character_is_not_open():
    t = build_tower(3, 2)
    bad = with_step_character(t, 1, ())
    assert not verify_open_orbit(bad, 1).ok
    with pytest.raises(ConstructionFailure):
        _verify_or_raise(bad)


def test_degenerate_character_fails_bullet():
    t = build_tower(3, 1)
    # keep only one of the needed entries on V_1
    bad = with_step_character(t, 1, ((0, 3, Fraction(1)),))
    assert not (verify_open_orbit(bad, 1).ok and verify_stabilizer_bullet(bad, 1).ok)


def test_bullet_index_range():
    t = build_tower(2, 1)
    with pytest.raises(IndexError):
        verify_stabilizer_bullet(t, 2)


def test_scaled_character_still_open():
    t = build_tower(5, 3, coefficient=Fraction(-3, 2))
    assert all(verify_open_orbit(t, i).ok for i in range(1, len(t) + 1))


@pytest.mark.parametrize("pair", [(3, 2), (5, 2), (4, 3)])
def test_permutation_conjugation_preserves_checks(pair):
    t = build_tower(*pair)
    n = t.n
    perm = list(range(n))[::-1]
    c = conjugate_tower(t, perm)
    for i in range(1, len(t) + 1):
        a, b = verify_open_orbit(t, i), verify_open_orbit(c, i)
        assert (a.dim_stabilizer, a.ok) == (b.dim_stabilizer, b.ok)


def test_block_tower_with_smaller_upper_block():
    t = build_block_tower(1, 2)
    assert [s.pair for s in t.steps] == [(1, 2), (1, 1)]


def test_j_matrices_3_2():
    t = build_tower(3, 2)
    jf = af_dual_matrix(t)
    assert jf.nonzero() == {(0, 1): 1, (1, 2): 1, (1, 3): 1, (2, 4): 1}
    j = lemma_j_matrix(t)
    # the diagonal V_3 coordinate E23 + E45 keeps only its top copy, at half weight
    assert j.nonzero() == {(0, 1): 1, (1, 2): Fraction(1, 2), (1, 3): 1, (2, 4): 1}
    assert isinstance(j, ExactMatrix)


def test_to_dict_is_one_based():
    d = build_tower(2, 1).to_dict()
    assert sorted(d["af"]["support"]) == [[1, 2, 1], [2, 3, 1]]
    assert d["dim_df"] == 3
