from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpspectra import DomainError, EnsembleSpec, Kind, Seed, SpecError, ensemble_moments, sample
from mpspectra.ensembles import balanced_row, balanced_rows, parse_aspect
from mpspectra.seeding import splitmix64

from .oracles import balanced_vectors


def enumerated_moments(length):
    rows = balanced_vectors(length)
    pair = np.mean(rows[:, 0] * rows[:, 1])
    quad = np.mean(rows[:, 0] * rows[:, 1] * rows[:, 2] * rows[:, 3])
    return pair, quad


def test_splitmix_reference_value():
    # first output of the reference SplitMix64 generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_seed_bounds():
    with pytest.raises(ValueError):
        Seed(-1)
    with pytest.raises(ValueError):
        Seed(0, 1 << 64)
    with pytest.raises(TypeError):
        Seed(1.5)
    assert Seed(5).for_trial(3) == Seed(5, 3)


def test_distinct_trials_give_distinct_streams():
    a = Seed(9, 0).stream().random(4)
    b = Seed(9, 1).stream().random(4)
    assert not np.array_equal(a, b)


def test_spec_validation():
    assert EnsembleSpec(Kind.IID_GAUSSIAN, 4, "1/2").N == 2
    with pytest.raises(SpecError):
        EnsembleSpec(Kind.IID_GAUSSIAN, 5, "1/2")
    with pytest.raises(SpecError):
        EnsembleSpec(Kind.SUM_ZERO_BERNOULLI_ROWS, 3, 1)
    with pytest.raises(SpecError):
        EnsembleSpec(Kind.MOVING_AVERAGE_ROWS, 3, 1, beta=3)
    with pytest.raises(SpecError):
        EnsembleSpec(Kind.IID_GAUSSIAN, 3, 1, beta=1)
    with pytest.raises(SpecError):
        EnsembleSpec("GUE", 3, 1)
    with pytest.raises(SpecError):
        parse_aspect(0.5)


@settings(max_examples=40)
@given(
    kind=st.sampled_from(list(Kind)),
    n=st.integers(1, 50),
    num=st.integers(1, 6),
    den=st.integers(1, 3),
)
def test_spec_json_round_trip(kind, n, num, den):
    try:
        spec = EnsembleSpec(kind, n, Fraction(num, den), beta=n - 1 if kind is Kind.MOVING_AVERAGE_ROWS else 0)
    except SpecError:
        return
    obj = spec.to_json()
    assert set(obj) == {"kind", "n", "aspect_num", "aspect_den", "beta"}
    assert EnsembleSpec.from_json(obj) == spec


def test_bernoulli_single_row_example():
    spec = EnsembleSpec(Kind.SUM_ZERO_BERNOULLI_ROWS, 1, 4)
    row = sample(spec, Seed(123)).matrix[0]
    assert row.sum() == 0
    assert any(np.array_equal(row, v) for v in balanced_vectors(4))


def test_sample_is_deterministic_and_read_only():
    spec = EnsembleSpec(Kind.IID_RADEMACHER, 2, 1)
    a, b = sample(spec, Seed(77, 3)), sample(spec, Seed(77, 3))
    assert np.array_equal(a.matrix, b.matrix)
    with pytest.raises(ValueError):
        a.matrix[0, 0] = 5.0


@pytest.mark.parametrize("kind", list(Kind))
def test_sample_shapes(kind):
    spec = EnsembleSpec(kind, 6, "4/3", beta=2 if kind is Kind.MOVING_AVERAGE_ROWS else 0)
    assert sample(spec, Seed(1)).matrix.shape == (6, 8)


def test_moving_average_beta_zero_is_the_gaussian_rows():
    spec = EnsembleSpec(Kind.MOVING_AVERAGE_ROWS, 3, 2, beta=0)
    seed = Seed(31, 4)
    assert np.array_equal(sample(spec, seed).matrix, seed.stream().standard_normal((3, 6)))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 30), half=st.integers(1, 20), master=st.integers(0, 2**64 - 1))
def test_bernoulli_rows_sum_exactly_zero(n, half, master):
    spec = EnsembleSpec(Kind.SUM_ZERO_BERNOULLI_ROWS, n, Fraction(2 * half, n))
    m = sample(spec, Seed(master)).matrix
    assert set(np.unique(m)) <= {-1.0, 1.0}
    assert np.all(m.sum(axis=1) == 0)


def test_balanced_row_rejects_odd_length():
    with pytest.raises(SpecError):
        balanced_row(3, Seed(0).stream())


def test_balanced_row_length_two():
    rng = Seed(2).stream()
    first = [balanced_row(2, rng)[0] for _ in range(4000)]
    assert abs(np.mean(np.array(first) == 1) - 0.5) <= 4 * 0.5 / np.sqrt(4000)


def test_balanced_row_frequencies_length_four():
    rng = Seed(2024).stream()
    draws = 60000
    vectors = balanced_vectors(4)
    codes = {tuple(v): i for i, v in enumerate(vectors)}
    counts = np.zeros(len(vectors))
    for _ in range(draws):
        counts[codes[tuple(balanced_row(4, rng).astype(float))]] += 1
    p = 1 / 6
    se = np.sqrt(p * (1 - p) / draws)
    assert np.all(np.abs(counts / draws - p) <= 4 * se)
    rows = np.array([balanced_row(4, rng) for _ in range(20000)], dtype=float)
    prod = rows[:, 0] * rows[:, 1]
    assert abs(prod.mean() + 1 / 3) <= 4 * prod.std(ddof=1) / np.sqrt(len(prod))


@pytest.mark.parametrize("length", [4, 8])
def test_moments_match_enumeration(length):
    pair, quad = enumerated_moments(length)
    assert ensemble_moments(Kind.SUM_ZERO_BERNOULLI_ROWS, length) == pytest.approx((pair, quad), abs=1e-15)


def test_moment_examples():
    assert ensemble_moments("SUM_ZERO_BERNOULLI_ROWS", 4) == pytest.approx((-1 / 3, 1.0))
    assert ensemble_moments("SUM_ZERO_BERNOULLI_ROWS", 8) == pytest.approx((-1 / 7, 3 / 35))
    assert ensemble_moments(Kind.IID_GAUSSIAN, 17) == (0.0, 0.0)
    with pytest.raises(DomainError):
        ensemble_moments(Kind.MOVING_AVERAGE_ROWS, 8)


@pytest.mark.parametrize("length", [8, 16])
def test_moments_monte_carlo(length):
    rows = balanced_rows(100_000, length, Seed(length).stream()).astype(float)
    pair_exact, quad_exact = ensemble_moments(Kind.SUM_ZERO_BERNOULLI_ROWS, length)
    pair = rows[:, 0] * rows[:, 1]
    quad = rows[:, 0] * rows[:, 1] * rows[:, 2] * rows[:, 3]
    for stat, exact in ((pair, pair_exact), (quad, quad_exact)):
        assert abs(stat.mean() - exact) <= 4 * stat.std(ddof=1) / np.sqrt(stat.size)


@pytest.mark.parametrize("b", [0, 2, 4])
def test_moving_average_dependence_range(b):
    trials = 4000
    n = 2 * b + 3
    spec = EnsembleSpec(Kind.MOVING_AVERAGE_ROWS, n, 1, beta=b)
    first_col = np.array([sample(spec, Seed(b, t)).matrix[:, 0] for t in range(trials)])
    for d in range(b + 3):
        x, y = first_col[:, 0], first_col[:, d]
        prod = x * y
        target = max(b + 1 - d, 0) / (b + 1)
        assert abs(prod.mean() - target) <= 4 * prod.std(ddof=1) / np.sqrt(trials)


@pytest.mark.parametrize("kind", list(Kind))
def test_unit_variance(kind):
    spec = EnsembleSpec(kind, 64, 2, beta=3 if kind is Kind.MOVING_AVERAGE_ROWS else 0)
    entries = np.concatenate([sample(spec, Seed(5, t)).matrix.ravel() for t in range(20)])
    sq = entries**2
    assert abs(sq.mean() - 1) <= 4 * sq.std(ddof=1) / np.sqrt(sq.size)


def test_pair_products_over_many_columns_agree_with_enumeration():
    pairs = list(combinations(range(8), 2))
    exact = enumerated_moments(8)[0]
    rows = balanced_vectors(8)
    for i, j in pairs:
        assert np.mean(rows[:, i] * rows[:, j]) == pytest.approx(exact, abs=1e-15)
