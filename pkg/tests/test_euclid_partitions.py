from math import gcd

import pytest

from euclidtower.euclid_partitions import (
    InvalidPair,
    NotCoprime,
    Partition,
    claimed_partition,
    coprime_pairs,
    euclid_chain,
    levi_blocks,
    orbit_dim,
    richardson_partition,
    slow_euclid_pairs,
    transpose,
)


def test_chain_8_5():
    c = euclid_chain(8, 5)
    assert c.remainders == (8, 5, 3, 2, 1, 0)
    assert c.quotients == (1, 1, 1, 2)
    assert c.s == 4 and c.steps == 5
    assert c.reconstruct() == (8, 5)


@pytest.mark.parametrize("pair", [(1, 1), (3, 5), (0, 1), (4, 0)])
def test_invalid_pairs(pair):
    with pytest.raises(InvalidPair):
        euclid_chain(*pair)


def test_not_coprime():
    with pytest.raises(NotCoprime):
        euclid_chain(6, 4)


def test_degenerate_pair_allowed_on_request():
    c = euclid_chain(1, 1, allow_equal=True)
    assert c.quotients == (1,)


def test_slow_euclid():
    assert slow_euclid_pairs(euclid_chain(3, 2)) == [(3, 2), (1, 2), (1, 1)]
    assert slow_euclid_pairs(euclid_chain(8, 5)) == [(8, 5), (3, 5), (3, 2), (1, 2), (1, 1)]


# (pair, partition, orbit dim, sum of slow-Euclid products), all worked by hand
ANCHORS = [
    ((2, 1), [3], 6, 3),
    ((3, 2), [4, 1], 18, 9),
    ((5, 3), [5, 2, 1], 48, 24),
    ((8, 5), [6, 3, 2, 1, 1], 128, 64),
]


@pytest.mark.parametrize("pair,parts,dim,half", ANCHORS)
def test_anchors(pair, parts, dim, half):
    chain = euclid_chain(*pair)
    p = claimed_partition(chain)
    assert p.tolist() == parts
    assert richardson_partition(levi_blocks(chain)) == p
    assert orbit_dim(p) == dim
    assert sum(a * b for a, b in slow_euclid_pairs(chain)) == half


def test_levi_blocks_8_5():
    assert levi_blocks(euclid_chain(8, 5)).tolist() == [1, 1, 1, 2, 3, 5]


def test_transpose_8_5():
    assert transpose(Partition((6, 3, 2, 1, 1))).tolist() == [5, 3, 2, 1, 1, 1]


def test_whittaker_pairs_give_regular_orbit():
    for n1 in range(1, 12):
        p = claimed_partition(euclid_chain(n1 + 1, 1))
        assert p.tolist() == [n1 + 2]


def test_coprime_pairs_enumeration():
    assert coprime_pairs(3) == [(2, 1)]
    assert coprime_pairs(5) == [(2, 1), (3, 1), (3, 2), (4, 1)]
    assert len(coprime_pairs(14)) == 31


@pytest.mark.parametrize("pair", coprime_pairs(20))
def test_closed_forms_agree(pair):
    chain = euclid_chain(*pair)
    p = claimed_partition(chain)
    assert p.n == sum(pair)
    assert p == richardson_partition(levi_blocks(chain))
    assert orbit_dim(p) == 2 * sum(a * b for a, b in slow_euclid_pairs(chain))
    assert levi_blocks(chain).n == sum(pair)


def test_transpose_is_involution():
    for n1, n2 in coprime_pairs(16):
        p = claimed_partition(euclid_chain(n1, n2))
        assert transpose(transpose(p)) == p
        assert gcd(n1, n2) == 1


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
