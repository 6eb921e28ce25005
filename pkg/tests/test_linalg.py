import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from mpspectra import CapacityError, DomainError, NumericalError
from mpspectra.linalg import (
    MAX_DIM,
    eigenvalues_sym,
    gram,
    spectral_norm,
    tql_eigenvalues,
    tridiagonalize,
    zero_mask,
)

from .oracles import sturm_eigenvalues

METHODS = ["lapack", "householder-ql"]


def random_symmetric(rng, n):
    x = rng.standard_normal((n, n))
    return (x + x.T) / 2


def test_gram_examples():
    assert_allclose(gram(np.eye(2)), 0.5 * np.eye(2), atol=0)
    assert_allclose(gram(np.array([[1.0, 1.0]])), [[2.0]])
    assert_allclose(gram([[3.0, 4.0]]), [[25.0]])


def test_gram_is_exactly_symmetric():
    a = np.random.default_rng(3).standard_normal((37, 81))
    g = gram(a)
    assert np.array_equal(g, g.T)


def test_gram_capacity():
    with pytest.raises(CapacityError):
        gram(np.zeros((MAX_DIM + 1, 1)))


@pytest.mark.parametrize("bad", [np.zeros((0, 3)), np.zeros(4), np.array([[np.nan, 1.0]])])
def test_gram_rejects_bad_input(bad):
    with pytest.raises(DomainError):
        gram(bad)


@pytest.mark.parametrize("method", METHODS)
def test_eigenvalue_examples(method):
    assert_allclose(eigenvalues_sym(np.array([[2.0, 1.0], [1.0, 2.0]]), method), [1.0, 3.0], atol=1e-12)
    assert_allclose(eigenvalues_sym(np.diag([3.0, -1.0, 2.0]), method), [-1.0, 2.0, 3.0], atol=1e-14)
    assert_allclose(eigenvalues_sym(np.array([[5.0]]), method), [5.0])


def test_only_lower_triangle_read():
    m = np.array([[2.0, 99.0], [1.0, 2.0]])
    for method in METHODS:
        assert_allclose(eigenvalues_sym(m, method), [1.0, 3.0], atol=1e-12)


def test_unknown_method():
    with pytest.raises(DomainError):
        eigenvalues_sym(np.eye(2), method="jacobi")


def test_sturm_oracle_fixed_case():
    rng = np.random.default_rng(42)
    m = random_symmetric(rng, 6)
    ref = sturm_eigenvalues(m)
    for method in METHODS:
        assert_allclose(eigenvalues_sym(m, method), ref, atol=1e-10)


@pytest.mark.parametrize("method", METHODS)
def test_backends_agree_on_gram(method):
    a = np.random.default_rng(11).standard_normal((40, 60))
    g = gram(a)
    assert_allclose(eigenvalues_sym(g, method), np.linalg.eigvalsh(g), atol=1e-12)


def test_tridiagonal_preserves_spectrum():
    m = random_symmetric(np.random.default_rng(5), 9)
    d, e = tridiagonalize(m)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert_allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(m), atol=1e-12)
    assert_allclose(tql_eigenvalues(d, e), np.linalg.eigvalsh(m), atol=1e-12)


def test_ql_reports_failure_on_non_finite():
    with pytest.raises(NumericalError):
        tql_eigenvalues(np.array([1.0, np.nan, 2.0]), np.array([1.0, 1.0]))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
def test_orthogonal_similarity_invariance(n, seed):
    rng = np.random.default_rng(seed)
    m = random_symmetric(rng, n)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    rotated = q @ m @ q.T
    for method in METHODS:
        assert_allclose(eigenvalues_sym(rotated, method), eigenvalues_sym(m, method), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 12), cols=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_gram_spectrum_nonnegative_and_conserving(n, cols, seed):
    a = np.random.default_rng(seed).standard_normal((n, cols))
    g = gram(a)
    vals = eigenvalues_sym(g)
    assert vals[0] >= -1e-12 * max(1.0, vals[-1])
    assert abs(vals.sum() - np.trace(g)) <= 1e-9 * max(1.0, abs(np.trace(g)))
    assert abs((vals**2).sum() - (g**2).sum()) <= 1e-9 * max(1.0, (g**2).sum())


def test_rank_deficiency_gives_zeros():
    a = np.random.default_rng(8).standard_normal((10, 4))
    vals = eigenvalues_sym(gram(a))
    assert zero_mask(vals).sum() == 6


def test_spectral_norm():
    assert spectral_norm(np.diag([-4.0, 1.0])) == 4.0
    assert spectral_norm(gram(np.eye(2))) == 0.5
