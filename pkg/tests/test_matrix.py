import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from relkmeans.errors import (
    AsymmetryError,
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteError,
    NonSquareError,
    NonzeroDiagonalError,
)
from relkmeans.matrix import from_points, validate_matrix
from relkmeans.spectral import gower_center, min_restricted_eigenvalue


def test_single_point():
    m = validate_matrix([[0]])
    assert m.n == 1 and m.scale == 0.0


def test_symmetric_pair():
    m = validate_matrix([[0, 1], [1, 0]])
    assert m.n == 2
    assert m.scale == 1.0
    assert not m.has_negative_entries


def test_asymmetry_reported():
    with pytest.raises(AsymmetryError) as info:
        validate_matrix([[0, 1], [2, 0]], tolerance=1e-9)
    assert (info.value.i, info.value.j) == (0, 1)


def test_negative_entries_flagged():
    m = validate_matrix([[0, -1], [-1, 0]])
    assert m.has_negative_entries


def test_small_asymmetry_is_averaged():
    m = validate_matrix([[0, 1.0], [1.0 + 1e-12, 0]])
    assert m.entries[0, 1] == m.entries[1, 0]
    assert m.entries[0, 1] == pytest.approx(1.0 + 5e-13, abs=1e-15)


def test_small_diagonal_zeroed():
    m = validate_matrix([[1e-14, 1.0], [1.0, 0]])
    assert m.entries[0, 0] == 0.0


@pytest.mark.parametrize(
    "raw, exc",
    [
        ([[0, 1, 2], [1, 0, 3]], NonSquareError),
        ([[1, 1], [1, 0]], NonzeroDiagonalError),
        ([[0, np.nan], [np.nan, 0]], NonFiniteError),
        ([[0, np.inf], [np.inf, 0]], NonFiniteError),
    ],
)
def test_rejections(raw, exc):
    with pytest.raises(exc):
        validate_matrix(raw)


def test_nonzero_diagonal_reports_worst_index():
    with pytest.raises(NonzeroDiagonalError) as info:
        validate_matrix([[0, 1, 1], [1, 0.5, 1], [1, 1, 2]])
    assert info.value.i == 2


def test_entries_read_only():
    m = validate_matrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        m.entries[0, 1] = 5


def test_from_points_examples():
    assert from_points([[0], [3]]).entries.tolist() == [[0, 9], [9, 0]]
    assert from_points([[0, 0], [3, 4]]).entries[0, 1] == 25
    assert from_points([[7, 7]]).entries.tolist() == [[0]]


def test_from_points_errors():
    with pytest.raises(DimensionMismatchError):
        from_points([[0, 1], [2]])
    with pytest.raises(EmptyInputError):
        from_points([])


points_strategy = st.integers(1, 12).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda d: arrays(np.float64, (n, d), elements=st.floats(-1e3, 1e3, allow_nan=False))
    )
)


@given(points_strategy)
@settings(max_examples=60, deadline=None)
def test_from_points_invariants(p):
    m = from_points(p)
    a = m.entries
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert not m.has_negative_entries
    assert m.scale == np.max(np.abs(a))
    assert validate_matrix(a).entries.tolist() == a.tolist()
    # Schoenberg: centered Euclidean matrices are PSD
    assert min_restricted_eigenvalue(gower_center(a)) >= -1e-9 * max(m.scale, 1.0)


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_validate_idempotent(n, seed):
    g = np.random.default_rng(seed)
    a = g.normal(size=(n, n))
    a = a + a.T
    np.fill_diagonal(a, 0)
    once = validate_matrix(a)
    twice = validate_matrix(once.entries.copy())
    assert np.array_equal(once.entries, twice.entries)
    assert validate_matrix(once) is once
