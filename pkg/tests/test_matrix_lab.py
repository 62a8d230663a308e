"""Matrix generation, erasure, and singular-value extraction."""

import math

import numpy as np
import pytest

from erasurelab.errors import DomainError
from erasurelab.matrix_lab import (
    ErasureSet,
    MatrixSample,
    enumerate_erasures,
    erase_rows,
    extreme_singular_values,
    generate,
    read_matrix,
    sample_sparse_unit_vector,
    write_matrix,
)


def test_gaussian_entries_moments():
    a = generate("gaussian", 1000, 1000, seed=2026).entries.ravel()
    n = a.size
    assert abs(a.mean()) < 5.0 / math.sqrt(n)
    assert abs(a.var() - 1.0) < 5.0 * math.sqrt(2.0 / n)
    # standardized fourth moment of a normal is 3
    assert abs((a**4).mean() - 3.0) < 5.0 * math.sqrt(96.0 / n)


def test_rademacher_entries_support():
    a = generate("rademacher", 300, 200, seed=5).entries
    assert set(np.unique(a)) == {-1.0, 1.0}
    assert abs(a.mean()) < 5.0 / math.sqrt(a.size)


def test_generate_deterministic_and_immutable():
    a = generate("gaussian", 20, 10, seed=99)
    b = generate("gaussian", 20, 10, seed=99)
    c = generate("gaussian", 20, 10, seed=100)
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, c.entries)
    with pytest.raises(ValueError):
        a.entries[0, 0] = 7.0
    with pytest.raises(DomainError):
        generate("poisson", 4, 4, seed=1)
    with pytest.raises(DomainError):
        generate("gaussian", 0, 4, seed=1)


def test_erase_rows_selects_survivors():
    m = generate("gaussian", 6, 3, seed=1)
    out = erase_rows(m, [1, 4])
    assert out.rows == 4
    want = m.entries[[0, 2, 3, 5]]
    assert np.array_equal(out.entries, want)
    with pytest.raises(DomainError):
        erase_rows(m, [6])


def test_erase_rows_composition():
    m = generate("rademacher", 10, 2, seed=3)
    once = erase_rows(m, [1, 3, 8])
    # erasing {1,3} then the row that was originally 8 (now index 6)
    twice = erase_rows(erase_rows(m, [1, 3]), [6])
    assert np.array_equal(once.entries, twice.entries)


def test_erasure_set_validation():
    es = ErasureSet(rows=6, kept=(0, 2, 5))
    assert es.erased == (1, 3, 4)
    with pytest.raises(DomainError):
        ErasureSet(rows=6, kept=(0, 2, 2))
    with pytest.raises(DomainError):
        ErasureSet(rows=6, kept=(2, 0))
    with pytest.raises(DomainError):
        ErasureSet(rows=6, kept=(0, 6))


def _cardano_gram_extremes(a: np.ndarray):
    """Closed-form singular extremes of a 3-column matrix via its Gram cubic."""
    g = a.T @ a
    p1 = g[0, 1] ** 2 + g[0, 2] ** 2 + g[1, 2] ** 2
    q = np.trace(g) / 3.0
    p2 = (g[0, 0] - q) ** 2 + (g[1, 1] - q) ** 2 + (g[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (g - q * np.eye(3)) / p
    r = float(np.linalg.det(b)) / 2.0
    phi = math.acos(min(1.0, max(-1.0, r))) / 3.0
    eig_hi = q + 2.0 * p * math.cos(phi)
    eig_lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    return math.sqrt(max(eig_lo, 0.0)), math.sqrt(eig_hi)


def test_singular_extremes_match_cardano_oracle():
    m = generate("gaussian", 6, 3, seed=77)
    got = extreme_singular_values(m)
    lo, hi = _cardano_gram_extremes(m.entries)
    assert got.s_min == pytest.approx(lo, rel=1e-9)
    assert got.s_max == pytest.approx(hi, rel=1e-9)
    assert got.cond == pytest.approx(hi / lo, rel=1e-9)


def test_singular_extremes_trivial_matrices():
    eye = MatrixSample(3, 3, "gaussian", 0, np.eye(3))
    got = extreme_singular_values(eye)
    assert (got.s_min, got.s_max, got.cond) == (1.0, 1.0, 1.0)
    tall = MatrixSample(3, 2, "gaussian", 0, np.array([[3.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    got = extreme_singular_values(tall)
    assert got.s_min == pytest.approx(1.0, rel=1e-12)
    assert got.s_max == pytest.approx(3.0, rel=1e-12)
    assert got.cond == pytest.approx(3.0, rel=1e-12)
    singular = MatrixSample(2, 2, "gaussian", 0, np.array([[1.0, 0.0], [0.0, 0.0]]))
    assert extreme_singular_values(singular).cond == math.inf
    wide = MatrixSample(2, 3, "gaussian", 0, np.zeros((2, 3)))
    with pytest.raises(DomainError):
        extreme_singular_values(wide)


def test_operator_norms_bound_random_vectors():
    m = generate("gaussian", 40, 12, seed=11)
    ext = extreme_singular_values(m)
    for i in range(100):
        x = sample_sparse_unit_vector(12, 12, seed=1000 + i)
        nrm = float(np.linalg.norm(m.entries @ x))
        assert ext.s_min - 1e-9 <= nrm <= ext.s_max + 1e-9


def test_sparse_vector_contract():
    v = sample_sparse_unit_vector(10, 3, seed=4)
    assert v.shape == (10,)
    assert np.count_nonzero(v) == 3
    assert np.linalg.norm(v) == pytest.approx(1.0, rel=1e-12)
    assert np.array_equal(v, sample_sparse_unit_vector(10, 3, seed=4))
    with pytest.raises(DomainError):
        sample_sparse_unit_vector(10, 0, seed=4)
    with pytest.raises(DomainError):
        sample_sparse_unit_vector(10, 11, seed=4)


def test_sparse_support_uniform():
    # 28 possible 2-subsets of 8 coordinates
    counts = {}
    trials = 5600
    for t in range(trials):
        v = sample_sparse_unit_vector(8, 2, seed=t)
        support = tuple(np.flatnonzero(v).tolist())
        counts[support] = counts.get(support, 0) + 1
    assert len(counts) == 28
    # binomial sd ~ 13.9 per cell; allow 5 sigma
    for support, c in counts.items():
        assert abs(c - 200) < 70, (support, c)


def test_enumerate_erasures_counts():
    assert sum(1 for _ in enumerate_erasures(4, 2)) == 6
    assert sum(1 for _ in enumerate_erasures(12, 3)) == 220
    sets = list(enumerate_erasures(4, 2))
    assert len({s.kept for s in sets}) == 6
    assert all(s.rows == 4 and len(s.kept) == 2 for s in sets)


def test_enumerate_erasures_cap_is_eager():
    with pytest.raises(DomainError):
        enumerate_erasures(40, 20)  # ~1.4e11 patterns, beyond the default cap
    with pytest.raises(DomainError):
        enumerate_erasures(4, 5)


def test_matrix_round_trip(tmp_path):
    m = generate("gaussian", 7, 4, seed=123)
    path = tmp_path / "m.txt"
    write_matrix(m, path)
    back = read_matrix(path)
    assert back.rows == m.rows and back.cols == m.cols
    assert back.distribution == m.distribution and back.seed == m.seed
    assert np.array_equal(back.entries, m.entries)


def test_matrix_sample_validation():
    with pytest.raises(DomainError):
        MatrixSample(2, 2, "gaussian", 0, np.zeros((3, 2)))
    # the entry cap guards generation, before anything is allocated
    with pytest.raises(DomainError, match="entry cap"):
        generate("gaussian", 1 << 14, 1 << 14, seed=0)
