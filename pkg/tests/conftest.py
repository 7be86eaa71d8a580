"""Shared fixtures: seeded RNG and random sparse-matrix generators."""

from __future__ import annotations

import numpy as np
import pytest

from chainpart.matrix import CsrMatrix


def random_pattern(rng, m, n, density=0.2, ensure_nonzero=True):
    """Random dense boolean pattern."""
    d = rng.random((m, n)) < density
    if ensure_nonzero and not d.any():
        d[rng.integers(m), rng.integers(n)] = True
    return d


def random_csr(rng, m, n, density=0.2, valued=False, ensure_nonzero=True):
    """(CsrMatrix, dense) pair over the same random pattern."""
    d = random_pattern(rng, m, n, density, ensure_nonzero)
    rows, cols = np.nonzero(d)
    values = None
    if valued:
        values = rng.integers(1, 10, size=len(rows)).astype(float)
    A = CsrMatrix.from_coo(m, n, rows, cols, values)
    return A, d


def banded_csr(rng, m, half_bandwidth, density=0.7):
    """Random banded square pattern with a guaranteed full diagonal.

    Returns (matrix, dense); dense is None for large m to bound memory.
    """
    offsets = np.arange(-half_bandwidth, half_bandwidth + 1)
    rows = np.repeat(np.arange(m), len(offsets))
    cols = rows + np.tile(offsets, m)
    keep = (cols >= 0) & (cols < m)
    keep &= (rows == cols) | (rng.random(len(rows)) < density)
    rows, cols = rows[keep], cols[keep]
    A = CsrMatrix.from_coo(m, m, rows, cols)
    if m > 2048:
        return A, None
    d = np.zeros((m, m), dtype=bool)
    d[rows, cols] = True
    return A, d


def symmetric_csr(rng, m, density=0.2):
    d = random_pattern(rng, m, m, density)
    d = d | d.T
    rows, cols = np.nonzero(d)
    return CsrMatrix.from_coo(m, m, rows, cols), d


def degree_chain_csr(degrees):
    """Matrix whose row i has `degrees[i]` nonzeros packed from column 0.

    Row costs under entry-counting objectives then equal the given degrees,
    which makes hand-checked chain-partitioning examples easy to encode.
    """
    degrees = list(degrees)
    n = max(degrees) if degrees else 0
    rows, cols = [], []
    for r, d in enumerate(degrees):
        for c in range(d):
            rows.append(r)
            cols.append(c)
    dense = np.zeros((len(degrees), max(n, 1)), dtype=bool)
    if rows:
        dense[rows, cols] = True
    A = CsrMatrix.from_coo(len(degrees), max(n, 1), np.array(rows, dtype=int),
                           np.array(cols, dtype=int))
    return A, dense


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


@pytest.fixture(scope="session")
def kernel_warmup():
    """Trigger jit compilation outside the timed sections of the acceptance
    suite so budgets measure the algorithms, not the compiler."""
    from chainpart.bottleneck import lazy_bisect_partition
    from chainpart.costs import nonsym_initial
    from chainpart.dominance import OfflineDominanceCounter, constant_pass_params

    rng = np.random.default_rng(0)
    A, _ = banded_csr(rng, 64, 3, density=1.0)
    xs = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    ctr = OfflineDominanceCounter(xs, A.col_idx, grid=(A.nrows, A.ncols),
                                  params=constant_pass_params(A.ncols))
    ctr.count_many(np.array([10, 20]), np.array([10, 20]))
    lazy_bisect_partition(A, nonsym_initial(), 2, eps=0.1)


# --- acceptance reporting -------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    slug = "_".join(name.split("_")[3:])
    outcome = _ACCEPTANCE.get(num, ("PASS", slug))[0]
    if report.failed:
        outcome = "FAIL"
    elif report.skipped:
        outcome = "SKIP"
    _ACCEPTANCE[num] = (outcome, slug)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    try:
        from test_acceptance import NOTES
    except ImportError:
        NOTES = {}
    terminalreporter.write_sep("=", "acceptance summary")
    for num in sorted(_ACCEPTANCE):
        outcome, slug = _ACCEPTANCE[num]
        note = NOTES.get(num, "")
        line = f"ACCEPTANCE {num:02d} {slug}: {outcome}"
        if note:
            line += f"  ({note})"
        terminalreporter.write_line(line)
