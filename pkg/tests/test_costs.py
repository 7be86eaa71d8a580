"""Cost-model tests: range atoms across all three backends, objective
evaluation, property checking, and bottleneck cost bounds."""

from __future__ import annotations

import math

import numpy as np
import pytest

import oracles
from conftest import degree_chain_csr, random_csr

from chainpart.costs import (
    AtomCounters,
    AtomSweep,
    CostCoefficients,
    CostOracle,
    bounds_for,
    chains_on_chains,
    check_property,
    connectivity,
    edge_cut_partwise,
    evaluate_partition,
    hyperedge_cut_partwise,
    mono_symmetric,
    nonsym,
    nonsym_initial,
    with_threshold,
    work,
)
from chainpart.matrix import CsrMatrix
from chainpart.partition import SplitPartition


def identity_matrix(m):
    return CsrMatrix.from_coo(m, m, np.arange(m), np.arange(m))


def _assert_atoms_equal(got, want, keys=None):
    for key, expect in want.items():
        if keys is not None and key not in keys:
            continue
        if expect is None:
            continue
        assert getattr(got, key) == expect, key


# ---------------------------------------------------------------------------
# atoms


def test_atoms_empty_range_all_zero(rng):
    A, _ = random_csr(rng, 6, 6, density=0.4)
    ac = AtomCounters(A)
    for i in range(7):
        at = ac.atoms(i, i)
        assert (at.rows, at.entries, at.entries_above_min, at.within,
                at.contained, at.incident, at.diagonal) == (0,) * 7


def test_atoms_identity_full_range():
    m = 5
    ac = AtomCounters(identity_matrix(m), min_degree=1)
    at = ac.atoms(0, m)
    assert at.rows == at.entries == at.incident == at.diagonal == m
    assert at.within == m
    assert at.contained == m
    assert at.entries_above_min == 0


def test_atoms_match_set_algebra_all_ranges(rng):
    A, d = random_csr(rng, 12, 12, density=0.3)
    col_part = rng.integers(0, 3, size=12)
    ac = AtomCounters(A, min_degree=1, col_part=col_part)
    for i in range(13):
        for j in range(i, 13):
            want = oracles.atoms_by_sets(d, i, j, min_degree=1,
                                         col_part=col_part, part=1)
            _assert_atoms_equal(ac.atoms(i, j, part=1), want)


def test_atoms_nonsquare(rng):
    for m, n in ((5, 11), (11, 5)):
        A, d = random_csr(rng, m, n, density=0.35)
        ac = AtomCounters(A)
        for i in range(m + 1):
            for j in range(i, m + 1):
                want = oracles.atoms_by_sets(d, i, j)
                _assert_atoms_equal(ac.atoms(i, j), want)


def test_atom_ordering_invariants(rng):
    A, d = random_csr(rng, 10, 10, density=0.35)
    col_part = rng.integers(0, 2, size=10)
    ac = AtomCounters(A, min_degree=1, col_part=col_part)
    for i in range(11):
        for j in range(i, 11):
            at = ac.atoms(i, j, part=0)
            assert at.local <= at.incident <= at.entries
            assert at.incident <= at.diagonal <= at.incident + at.rows
            assert at.within <= at.entries
            assert at.entries_above_min <= at.entries


def test_sweep_backend_matches_offline(rng):
    A, d = random_csr(rng, 11, 9, density=0.3)
    col_part = rng.integers(0, 3, size=9)
    ac = AtomCounters(A, min_degree=1, col_part=col_part)
    sweep = AtomSweep(A, min_degree=1, col_part=col_part, part=2)
    for e in range(A.nrows):
        sweep.extend()
        sweep.reset_to()
        for s in range(e, -1, -1):
            if s < e:
                sweep.shrink_front()
            got = sweep.atoms()
            want = ac.atoms(s, e + 1, part=2)
            assert got == want, (s, e)


def test_link_identity_every_range(rng):
    for _ in range(8):
        m, n = int(rng.integers(1, 14)), int(rng.integers(1, 14))
        A, d = random_csr(rng, m, n, density=0.35)
        ac = AtomCounters(A)
        for i in range(m + 1):
            for j in range(i, m + 1):
                assert ac.atoms(i, j).incident == len(oracles.union_columns(d, i, j))


# ---------------------------------------------------------------------------
# objective evaluation


def test_eval_empty_part_is_zero(rng):
    A, _ = random_csr(rng, 6, 6, density=0.4)
    col_part = np.zeros(6, dtype=int)
    ac = AtomCounters(A, min_degree=1, col_part=col_part)
    at = ac.atoms(3, 3, part=0)
    for obj in (chains_on_chains(), work(), connectivity(), nonsym_initial(),
                nonsym(), mono_symmetric(A), edge_cut_partwise(),
                hyperedge_cut_partwise()):
        assert obj.value(at) == 0


def test_eval_mono_symmetric_identity():
    m = 7
    A = identity_matrix(m)
    coef = CostCoefficients(row_cost=2, entry_cost=1, message_cost=3, min_degree=1)
    obj = mono_symmetric(A, coef)
    at = AtomCounters(A, min_degree=1).atoms(0, m)
    assert obj.value(at) == 3 * m


def test_eval_chains_on_degree_example():
    A, _ = degree_chain_csr([3, 1, 2, 4])
    ac = AtomCounters(A)
    assert chains_on_chains().value(ac.atoms(0, 3)) == 6
    assert chains_on_chains().value(ac.atoms(0, 4)) == 10


def test_eval_formulas_match_atoms(rng):
    A, d = random_csr(rng, 9, 9, density=0.35)
    col_part = rng.integers(0, 2, size=9)
    coef = CostCoefficients(row_cost=10, entry_cost=1, message_cost=100, min_degree=1)
    ac = AtomCounters(A, min_degree=1, col_part=col_part)
    for i in range(10):
        for j in range(i, 10):
            at = ac.atoms(i, j, part=1)
            assert work(coef).value(at) == 10 * at.rows + at.entries
            assert nonsym_initial(coef).value(at) == 10 * at.rows + at.entries + 100 * at.incident
            assert nonsym(coef).value(at) == (10 * at.rows + at.entries
                                              + 100 * (at.incident - at.local))
            assert edge_cut_partwise().value(at) == -at.within
            assert hyperedge_cut_partwise().value(at) == -at.contained
            assert connectivity().value(at) == at.incident


def test_threshold_trips_to_infinity():
    A, _ = degree_chain_csr([3, 1, 2, 4])
    ac = AtomCounters(A)
    obj = with_threshold(chains_on_chains(), limit=6)
    assert obj.value(ac.atoms(0, 3)) == 6
    assert obj.value(ac.atoms(0, 4)) == math.inf
    # zero-coefficient base: value is exactly the threshold term, and an
    # untripped threshold contributes exactly zero
    zero = work(CostCoefficients(row_cost=0, entry_cost=0))
    tau = with_threshold(zero, limit=6)
    assert tau.value(ac.atoms(0, 3)) == 0
    assert tau.value(ac.atoms(0, 4)) == math.inf


def test_partition_equivalences_with_conventional_metrics(rng):
    for _ in range(6):
        m = int(rng.integers(2, 12))
        A, d = random_csr(rng, m, m, density=0.3)
        K = int(rng.integers(1, 4))
        mids = np.sort(rng.integers(0, m + 1, size=K - 1))
        splits = (0,) + tuple(int(v) for v in mids) + (m,)
        row_part = oracles.row_part_from_splits(m, splits)
        ac = AtomCounters(A)
        parts = oracles.parts_of_splits(splits)
        n_nonempty = oracles.nonempty_columns(d)

        cut_sum = sum(edge_cut_partwise().value(ac.atoms(a, b)) for a, b in parts)
        assert cut_sum + A.nnz == oracles.edge_cut(d, row_part)

        hyper_sum = sum(hyperedge_cut_partwise().value(ac.atoms(a, b)) for a, b in parts)
        assert -hyper_sum == n_nonempty - oracles.hyperedge_cut(d, row_part)

        conn_sum = sum(connectivity().value(ac.atoms(a, b)) for a, b in parts)
        assert conn_sum - n_nonempty == oracles.lambda_minus_one_cut(d, row_part)


def test_evaluate_partition_report(rng):
    m = 10
    A, d = random_csr(rng, m, m, density=0.3)
    part = SplitPartition.from_splits(m, [0, 4, 7, m])
    rep = evaluate_partition(A, part, connectivity())
    row_part = oracles.row_part_from_splits(m, [0, 4, 7, m])
    assert rep.bottleneck == max(rep.per_part)
    assert rep.total == sum(rep.per_part)
    assert rep.metrics["edge_cut"] == oracles.edge_cut(d, row_part)
    assert rep.metrics["hyperedge_cut"] == oracles.hyperedge_cut(d, row_part)
    assert rep.metrics["lambda_minus_one"] == oracles.lambda_minus_one_cut(d, row_part)


# ---------------------------------------------------------------------------
# property checks


def test_static_flags():
    assert chains_on_chains().increasing
    assert connectivity().increasing and connectivity().convex
    assert hyperedge_cut_partwise().decreasing and hyperedge_cut_partwise().convex
    assert edge_cut_partwise().decreasing and edge_cut_partwise().convex
    coef_ok = CostCoefficients(row_cost=10, entry_cost=1, message_cost=5, min_degree=1)
    coef_bad = CostCoefficients(row_cost=1, entry_cost=1, message_cost=5, min_degree=1)
    A = identity_matrix(3)
    assert mono_symmetric(A, coef_ok).increasing
    assert not mono_symmetric(A, coef_bad).increasing


def test_check_property_confirms_flags(rng):
    for _ in range(6):
        m = int(rng.integers(2, 12))
        A, _ = random_csr(rng, m, m, density=0.35)
        for obj in (chains_on_chains(), work(), connectivity()):
            assert check_property(obj, A, "increasing").holds
            assert check_property(obj, A, "subadditive").holds
        for obj in (chains_on_chains(), work()):
            # additive: both directions hold with equality
            assert check_property(obj, A, "superadditive").holds
            assert check_property(obj, A, "convex").holds
            assert check_property(obj, A, "concave").holds
        assert check_property(connectivity(), A, "convex").holds
        for obj in (edge_cut_partwise(), hyperedge_cut_partwise()):
            assert check_property(obj, A, "decreasing").holds
            assert check_property(obj, A, "convex").holds
        mono = mono_symmetric(A, CostCoefficients(row_cost=10, entry_cost=1,
                                                  message_cost=5))
        assert check_property(mono, A, "increasing").holds
        assert check_property(mono, A, "convex").holds


def test_check_property_nonsym_per_part(rng):
    A, _ = random_csr(rng, 8, 8, density=0.4)
    col_part = rng.integers(0, 3, size=8)
    res = check_property(nonsym(), A, "increasing", col_part=col_part)
    assert res.holds


def test_threshold_property_flags(rng):
    A, _ = random_csr(rng, 8, 8, density=0.4)
    zero = work(CostCoefficients(row_cost=0, entry_cost=0))
    tau = with_threshold(zero, limit=float(A.nnz) / 2)
    assert check_property(tau, A, "increasing").holds
    assert check_property(tau, A, "superadditive").holds
    assert check_property(tau, A, "concave").holds


def test_mono_symmetric_violation_found_on_light_row():
    # middle row is light: its columns and diagonal cell are already covered,
    # so appending it *reduces* the cost when messages outweigh row work
    A = CsrMatrix.from_coo(
        3, 3,
        [0, 0, 0, 1, 2, 2, 2],
        [0, 1, 2, 1, 0, 1, 2],
    )
    coef = CostCoefficients(row_cost=1, entry_cost=1, message_cost=5, min_degree=1)
    obj = mono_symmetric(A, coef)
    res = check_property(obj, A, "increasing")
    assert not res.holds
    assert res.counterexample is not None
    (r1, v1), (r2, v2) = res.counterexample
    # the wider range must be cheaper for a genuine violation
    assert r1[0] >= r2[0] and r1[1] <= r2[1] and (r1 != r2)
    assert v1 > v2


# ---------------------------------------------------------------------------
# bounds


def test_bounds_chains_example():
    A, _ = degree_chain_csr([3, 1, 2, 4])
    lo, hi = bounds_for(chains_on_chains(), A, 2)
    assert (lo, hi) == (5, 10)


def test_bounds_k1_attained(rng):
    A, _ = random_csr(rng, 8, 8, density=0.4)
    obj = connectivity()
    lo, hi = bounds_for(obj, A, 1)
    f_all = CostOracle(A, obj)(0, 8, 0)
    assert lo <= f_all <= hi
    assert hi == f_all


def test_bounds_bracket_enumeration_optimum(rng):
    for _ in range(6):
        m = int(rng.integers(2, 11))
        K = int(rng.integers(1, 5))
        A, d = random_csr(rng, m, m, density=0.35)
        for obj in (chains_on_chains(), work(), connectivity(), nonsym_initial()):
            lo, hi = bounds_for(obj, A, K)
            oracle = CostOracle(A, obj)
            opt, _ = oracles.best_bottleneck(m, K, lambda k, a, b: oracle(a, b, k),
                                             allow_empty=True)
            assert lo <= opt <= hi
            assert opt >= (CostOracle(A, obj)(0, m, 0)) / K or not obj.subadditive


def test_bounds_decreasing_objective(rng):
    A, d = random_csr(rng, 9, 9, density=0.35)
    obj = hyperedge_cut_partwise()
    lo, hi = bounds_for(obj, A, 3)
    oracle = CostOracle(A, obj)
    assert lo == oracle(0, 9, 0)
    assert hi == 0
    opt, _ = oracles.best_bottleneck(9, 3, lambda k, a, b: oracle(a, b, k),
                                     allow_empty=True)
    assert lo <= opt <= hi


def test_cost_oracle_instrumented(rng):
    A, _ = random_csr(rng, 6, 6, density=0.4)
    oracle = CostOracle(A, connectivity())
    before = oracle.calls
    oracle(0, 3, 0)
    oracle(2, 6, 1)
    assert oracle.calls == before + 2


# ---------------------------------------------------------------------------
# direct (counter-free) evaluation paths


def _objective_grid(A, col_parts):
    """(objective, col_part) pairs exercising every atom and flag."""
    out = [
        (chains_on_chains(), None),
        (work(), None),
        (connectivity(), None),
        (nonsym_initial(), None),
        (edge_cut_partwise(), None),
        (hyperedge_cut_partwise(), None),
        (with_threshold(work(), 9.0), None),
    ]
    if A.nrows == A.ncols:
        out.append((mono_symmetric(A, CostCoefficients(10, 1, 5)), None))
    for cp in col_parts:
        out.append((nonsym(), cp))
    return out


def test_partition_costs_direct_matches_oracle(rng):
    from chainpart.costs import partition_costs_direct

    for trial in range(30):
        m = int(rng.integers(1, 15))
        n = int(rng.integers(1, 15))
        A, d = random_csr(rng, m, n, density=float(rng.uniform(0.05, 0.6)))
        cp = rng.integers(0, 3, size=n)
        K = int(rng.integers(1, 5))
        cuts = np.sort(rng.integers(0, m + 1, size=K - 1))
        splits = np.concatenate([[0], cuts, [m]])
        for obj, col_part in _objective_grid(A, [cp]):
            oracle = CostOracle(A, obj, col_part=col_part)
            want = [oracle(int(a), int(b), k)
                    for k, (a, b) in enumerate(zip(splits, splits[1:]))]
            got = partition_costs_direct(A, obj, splits, col_part=col_part)
            assert got == want, (m, n, obj.name, splits.tolist())


def test_bounds_for_matches_counter_reference(rng):
    for trial in range(20):
        m = int(rng.integers(1, 13))
        n = int(rng.integers(1, 13))
        A, d = random_csr(rng, m, n, density=float(rng.uniform(0.05, 0.6)))
        cp = rng.integers(0, 2, size=n)
        for obj, col_part in _objective_grid(A, [cp]):
            K = int(rng.integers(1, 5))
            got = bounds_for(obj, A, K, col_part=col_part)

            # reference: the same bracket from per-range counter queries
            ac = AtomCounters(A, min_degree=obj.min_degree(A), col_part=col_part)
            parts = ([None] if obj.uniform
                     else list(range(int(np.max(col_part)) + 1)))
            full = [obj.value(ac.atoms(0, m, part=p)) for p in parts]
            if obj.decreasing:
                want = (min(full), 0.0)
            else:
                singles = 0.0
                for i in range(m):
                    singles = max(singles, min(
                        obj.value(ac.atoms(i, i + 1, part=p)) for p in parts))
                if obj.subadditive and obj.uniform:
                    lb = max(full)
                else:
                    at = ac.atoms(0, m)
                    c = obj.coef
                    lb = (c[0] * at.rows + c[1] * at.entries
                          + c[2] * at.entries_above_min)
                want = (float(max(singles, lb / K)), float(max(full)))
            assert got == want, (m, n, K, obj.name)
