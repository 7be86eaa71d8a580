"""Command-line interface tests: partition, evaluate, bench, reorder,
domcount, configuration precedence, and exit codes."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest

import oracles
from conftest import degree_chain_csr, random_csr

from chainpart.cli import EXIT_BAD_CONFIG, EXIT_INFEASIBLE, EXIT_IO, main
from chainpart.costs import CostOracle, connectivity
from chainpart.matrix import load_matrix_market, save_matrix_market


@pytest.fixture
def degrees_mtx(tmp_path):
    A, _ = degree_chain_csr([3, 1, 2, 4])
    p = tmp_path / "degrees.mtx"
    save_matrix_market(p, A)
    return p


@pytest.fixture
def random_mtx(tmp_path, rng):
    A, d = random_csr(rng, 12, 12, density=0.3)
    p = tmp_path / "rand12.mtx"
    save_matrix_market(p, A)
    return p, A, d


def test_partition_balance_work_exact(degrees_mtx, tmp_path, capsys):
    out = tmp_path / "part.json"
    rc = main(["partition", str(degrees_mtx), "--obj", "balance-work", "--alg",
               "exact", "-K", "2", "--c-row", "0", "--c-entry", "1",
               "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "split"
    assert doc["K"] == 2
    assert doc["splits"] == [1, 4, 5]  # serialized 1-based
    text = capsys.readouterr().out
    assert "cost" in text and "6" in text


def test_partition_k1(degrees_mtx, tmp_path):
    out = tmp_path / "part.json"
    rc = main(["partition", str(degrees_mtx), "--obj", "balance-work", "--alg",
               "exact", "-K", "1", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["splits"] == [1, 5]


def test_partition_split_conn_quadrangle(random_mtx, tmp_path):
    path, A, d = random_mtx
    out = tmp_path / "p.json"
    rc = main(["partition", str(path), "--obj", "split-conn", "--alg",
               "quadrangle", "-K", "3", "--balance", "0.1", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    splits0 = [s - 1 for s in doc["splits"]]
    oracle = CostOracle(A, connectivity())
    wcap = 1.1 * A.nnz / 3
    pos = A.row_start
    opt, _ = oracles.best_total(
        12, 3, lambda k, a, b: oracle(a, b, k),
        feasible=lambda a, b: pos[b] - pos[a] <= wcap,
    )
    got = sum(oracle(a, b, 0) for a, b in oracles.parts_of_splits(splits0))
    assert got == opt


def test_partition_lazy_and_approx(degrees_mtx, tmp_path):
    for alg in ("approx", "lazy"):
        out = tmp_path / f"{alg}.json"
        rc = main(["partition", str(degrees_mtx), "--obj", "balance-work",
                   "--alg", alg, "-K", "2", "--eps", "0.01", "--c-row", "0",
                   "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["splits"][0] == 1 and doc["splits"][-1] == 5


def test_partition_assign_strategy(random_mtx, tmp_path):
    path, A, d = random_mtx
    rows_out = tmp_path / "rows.json"
    assert main(["partition", str(path), "--obj", "balance-conn", "--alg",
                 "exact", "-K", "3", "--out", str(rows_out)]) == 0
    cols_out = tmp_path / "cols.json"
    rc = main(["partition", str(path), "--obj", "assign-local", "--seed", "5",
               "--partition", str(rows_out), "--out", str(cols_out)])
    assert rc == 0
    doc = json.loads(cols_out.read_text())
    assert doc["kind"] == "map"
    assert len(doc["assign"]) == A.ncols
    assert all(1 <= v <= 3 for v in doc["assign"])


def test_partition_block(random_mtx, tmp_path):
    path, A, d = random_mtx
    out = tmp_path / "b.json"
    rc = main(["partition", str(path), "--obj", "block-conn", "--block-size",
               "4", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    sizes = np.diff(doc["splits"])
    assert (sizes <= 4).all()
    rc = main(["partition", str(path), "--obj", "block-equally", "--block-size",
               "5", "--out", str(tmp_path / "be.json")])
    assert rc == 0
    assert json.loads((tmp_path / "be.json").read_text())["splits"] == [1, 6, 11, 13]


def test_partition_split_equally(random_mtx, tmp_path):
    path, A, d = random_mtx
    out = tmp_path / "eq.json"
    assert main(["partition", str(path), "--obj", "split-equally", "-K", "4",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["splits"] == [1, 4, 7, 10, 13]


def test_evaluate_identity_connectivity(tmp_path, capsys):
    from chainpart.matrix import CsrMatrix

    A = CsrMatrix.from_coo(5, 5, np.arange(5), np.arange(5))
    p = tmp_path / "eye.mtx"
    save_matrix_market(p, A)
    part = tmp_path / "part.json"
    part.write_text(json.dumps({"kind": "split", "K": 1, "splits": [1, 6]}))
    rc = main(["evaluate", str(p), "--partition", str(part), "--obj", "split-conn"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "total 5" in out.replace("=", " ").replace(":", " ")


def test_evaluate_round_trip_reproduces_cost(random_mtx, tmp_path, capsys):
    path, A, d = random_mtx
    out = tmp_path / "p.json"
    main(["partition", str(path), "--obj", "balance-conn", "--alg", "exact",
          "-K", "3", "--out", str(out)])
    reported = None
    for line in capsys.readouterr().out.splitlines():
        if line.startswith("cost"):
            reported = float(line.split()[-1])
    assert reported is not None
    rc = main(["evaluate", str(path), "--partition", str(out), "--obj",
               "balance-conn"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    bottleneck = [float(l.split()[-1]) for l in lines if l.startswith("bottleneck")]
    assert bottleneck and bottleneck[0] == reported


def test_evaluate_lambda_report(random_mtx, tmp_path, capsys):
    path, A, d = random_mtx
    part = tmp_path / "p.json"
    part.write_text(json.dumps({"kind": "split", "K": 3, "splits": [1, 5, 9, 13]}))
    rc = main(["evaluate", str(path), "--partition", str(part), "--obj", "split-conn"])
    assert rc == 0
    out = capsys.readouterr().out
    row_part = oracles.row_part_from_splits(12, [0, 4, 8, 12])
    want = oracles.lambda_minus_one_cut(d, row_part)
    lam = [l for l in out.splitlines() if l.startswith("lambda_minus_one")]
    assert lam and float(lam[0].split()[-1]) == want


def test_bench_single_cell(tmp_path, rng):
    suite = tmp_path / "suite"
    suite.mkdir()
    A, _ = random_csr(rng, 30, 30, density=0.2)
    save_matrix_market(suite / "a.mtx", A)
    out = tmp_path / "bench.csv"
    rc = main(["bench", str(suite), "--strategies", "balance-work", "--k-grid",
               "2", "--trials", "1", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 1
    assert rows[0]["matrix"] == "a.mtx"
    assert rows[0]["strategy"] == "balance-work"
    assert float(rows[0]["spmv_units"]) > 0
    profile = tmp_path / "bench_profile.csv"
    assert profile.exists()


def test_bench_profile_winners(tmp_path, rng):
    suite = tmp_path / "suite"
    suite.mkdir()
    A, _ = random_csr(rng, 24, 24, density=0.25)
    save_matrix_market(suite / "a.mtx", A)
    out = tmp_path / "bench.csv"
    rc = main(["bench", str(suite), "--strategies", "balance-work,balance-conn",
               "--k-grid", "2", "--trials", "1", "--out", str(out)])
    assert rc == 0
    prof = list(csv.DictReader((tmp_path / "bench_profile.csv").read_text().splitlines()))
    at_zero = [r for r in prof if float(r["deviation"]) == 0.0]
    frac = {r["strategy"]: float(r["fraction"]) for r in at_zero}
    # at deviation 0 exactly the per-matrix winners have fraction 1
    assert any(v == 1.0 for v in frac.values())
    data = list(csv.DictReader(out.read_text().splitlines()))
    costs = {r["strategy"]: float(r["cost"]) for r in data}
    best = min(costs.values())
    for strat, c in costs.items():
        assert (frac[strat] == 1.0) == (c == best)


def test_bench_deterministic_with_seed(tmp_path, rng):
    suite = tmp_path / "suite"
    suite.mkdir()
    A, _ = random_csr(rng, 20, 20, density=0.3)
    save_matrix_market(suite / "a.mtx", A)
    outs = []
    for name in ("b1.csv", "b2.csv"):
        out = tmp_path / name
        rc = main(["bench", str(suite), "--strategies", "assign-local",
                   "--k-grid", "2", "--trials", "3", "--seed", "7",
                   "--out", str(out)])
        assert rc == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        outs.append([r["cost"] for r in rows])
    assert outs[0] == outs[1]


def test_reorder_round_trip(tmp_path, rng):
    from conftest import banded_csr

    A, _ = banded_csr(rng, 20, 2)
    shuffled = tmp_path / "in.mtx"
    perm = rng.permutation(20)
    from chainpart.reorder import permute

    save_matrix_market(shuffled, permute(A, perm, perm))
    out = tmp_path / "out.mtx"
    pf = tmp_path / "perm.txt"
    rc = main(["reorder", str(shuffled), "--out", str(out), "--perm-out", str(pf)])
    assert rc == 0
    B = load_matrix_market(out)
    assert B.nnz == A.nnz
    from chainpart.reorder import bandwidth, read_permutation

    S = load_matrix_market(shuffled)
    assert bandwidth(B) <= bandwidth(S)
    rp = read_permutation(pf)
    assert sorted(rp.tolist()) == list(range(20))


def test_domcount_selftest(capsys):
    rc = main(["domcount", "--selftest", "--trials", "5", "--seed", "3"])
    assert rc == 0
    assert "ok" in capsys.readouterr().out.lower()


def test_exit_code_bad_combination(degrees_mtx):
    rc = main(["partition", str(degrees_mtx), "--obj", "split-conn", "--alg",
               "exact", "-K", "2"])
    assert rc == EXIT_BAD_CONFIG
    rc = main(["partition", str(degrees_mtx), "--obj", "balance-work", "--alg",
               "quadrangle", "-K", "2"])
    assert rc == EXIT_BAD_CONFIG


def test_exit_code_infeasible(degrees_mtx, tmp_path):
    # single row holds 4 nonzeros; a 3-nonzero cap cannot be met
    rc = main(["partition", str(degrees_mtx), "--obj", "split-conn", "--alg",
               "dynamic", "-K", "2", "--w-max", "3"])
    assert rc == EXIT_INFEASIBLE


def test_exit_code_io(tmp_path):
    rc = main(["partition", str(tmp_path / "missing.mtx"), "--obj",
               "balance-work", "--alg", "exact", "-K", "2"])
    assert rc == EXIT_IO
    bad = tmp_path / "bad.mtx"
    bad.write_text("garbage\n")
    rc = main(["evaluate", str(bad), "--partition", str(bad), "--obj", "split-conn"])
    assert rc == EXIT_IO


def test_config_file_precedence(degrees_mtx, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"obj": "balance-work", "alg": "exact", "K": 2,
                               "c_row": 0.0, "c_entry": 1.0}))
    out = tmp_path / "p.json"
    rc = main(["partition", str(degrees_mtx), "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["splits"] == [1, 4, 5]
    # CLI flag overrides the config file
    rc = main(["partition", str(degrees_mtx), "--config", str(cfg), "-K", "1",
               "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["splits"] == [1, 5]
