"""Reverse Cuthill-McKee ordering tests."""

from __future__ import annotations

import numpy as np

import oracles
from conftest import random_csr, symmetric_csr

from chainpart.matrix import CsrMatrix
from chainpart.reorder import (
    bandwidth,
    permute,
    rcm_order,
    read_permutation,
    reorder_matrix,
    write_permutation,
)


def path_graph(m):
    rows, cols = [], []
    for i in range(m - 1):
        rows += [i, i + 1]
        cols += [i + 1, i]
    return CsrMatrix.from_coo(m, m, np.array(rows), np.array(cols))


def test_rcm_path_graph_bandwidth_one():
    A = path_graph(12)
    perm = rcm_order(A)
    assert oracles.is_permutation(perm.tolist(), 12)
    B = permute(A, perm, perm)
    assert bandwidth(B) == 1


def test_rcm_shuffled_path_recovers_bandwidth():
    rng = np.random.default_rng(11)
    A = path_graph(30)
    shuffle = rng.permutation(30)
    S = permute(A, shuffle, shuffle)
    perm = rcm_order(S)
    assert bandwidth(permute(S, perm, perm)) == 1


def test_rcm_identity_pattern():
    A = CsrMatrix.from_coo(5, 5, np.arange(5), np.arange(5))
    perm = rcm_order(A)
    assert oracles.is_permutation(perm.tolist(), 5)
    assert bandwidth(permute(A, perm, perm)) == 0


def test_rcm_random_symmetric_is_permutation(rng):
    for _ in range(6):
        m = int(rng.integers(2, 25))
        A, d = symmetric_csr(rng, m, density=0.2)
        perm = rcm_order(A)
        assert oracles.is_permutation(perm.tolist(), m)


def test_rcm_reduces_bandwidth_on_shuffled_band(rng):
    from conftest import banded_csr

    A, d = banded_csr(rng, 40, 2)
    shuffle = rng.permutation(40)
    S = permute(A, shuffle, shuffle)
    perm = rcm_order(S)
    assert bandwidth(permute(S, perm, perm)) <= bandwidth(S)


def test_reorder_matrix_asymmetric_uses_both_sides(rng):
    A, d = random_csr(rng, 9, 6, density=0.3)
    B, rperm, cperm = reorder_matrix(A)
    assert oracles.is_permutation(rperm.tolist(), 9)
    assert oracles.is_permutation(cperm.tolist(), 6)
    assert B.nnz == A.nnz
    assert B.to_dense_pattern().tolist() == (
        A.to_dense_pattern()[np.ix_(rperm, cperm)].tolist()
    )


def test_bandwidth_oracle_agreement(rng):
    for _ in range(6):
        m = int(rng.integers(1, 20))
        A, d = random_csr(rng, m, m, density=0.3)
        assert bandwidth(A) == oracles.bandwidth_dense(d)


def test_permutation_file_round_trip(tmp_path, rng):
    perm = rng.permutation(9)
    p = tmp_path / "perm.txt"
    write_permutation(p, perm)
    # serialized 1-based, one index per line
    lines = p.read_text().strip().splitlines()
    assert [int(x) for x in lines] == [int(v) + 1 for v in perm]
    back = read_permutation(p)
    assert back.tolist() == perm.tolist()
