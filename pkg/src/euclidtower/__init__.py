"""Exact verification toolkit for Euclid-chain Fourier coefficient towers on GL_n."""

from .euclid_partitions import (
    DivisionChain,
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
from .exact_linalg import QQ, GF, Cyclotomic, ExactMatrix, kernel_basis, rank
from .orbit_lemma import LemmaReport, jordan_type, scan_verify, verify_lemma
from .tower import (
    AdditiveFunction,
    Tower,
    TowerStep,
    build_tower,
    lemma_j_matrix,
    verify_open_orbit,
    verify_stabilizer_bullet,
)

__version__ = "0.1.0"

__all__ = [
    "AdditiveFunction",
    "Cyclotomic",
    "DivisionChain",
    "ExactMatrix",
    "GF",
    "InvalidPair",
    "LemmaReport",
    "NotCoprime",
    "Partition",
    "QQ",
    "Tower",
    "TowerStep",
    "build_tower",
    "claimed_partition",
    "coprime_pairs",
    "euclid_chain",
    "jordan_type",
    "kernel_basis",
    "lemma_j_matrix",
    "levi_blocks",
    "orbit_dim",
    "rank",
    "richardson_partition",
    "scan_verify",
    "slow_euclid_pairs",
    "transpose",
    "verify_lemma",
    "verify_open_orbit",
    "verify_stabilizer_bullet",
]
