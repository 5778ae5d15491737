"""
tests.test_estimator

Tests de l'estimateur kNN de l'information mutuelle

"""

import math

import numpy as np
import pytest

from libs.dataset import Dataset
from libs.errors import NonFiniteDataError, UsageError
from libs.estimator import (
    MIQuery,
    count_within,
    digamma,
    estimate_mi,
    kth_neighbor_distance,
    mi_from_arrays,
)
from libs.utils import make_rng

EULER_GAMMA = 0.5772156649015329


def gaussian_pair(rho: float, n: int, seed: int) -> Dataset:
    rng = make_rng(seed)
    x = rng.standard_normal(n)
    y = rho * x + math.sqrt(1 - rho**2) * rng.standard_normal(n)
    return Dataset(x.reshape(-1, 1), y, ("X1",))


# ---------
# digamma
# ---------

@pytest.mark.parametrize("x, expected", [
    (1.0, -EULER_GAMMA),
    (2.0, 1.0 - EULER_GAMMA),
    (0.5, -EULER_GAMMA - 2.0 * math.log(2.0)),
])
def test_digamma_known_values(x, expected):
    assert digamma(x) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 10.0, 100.0])
def test_digamma_recurrence(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1.0 / x, abs=1e-10)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_digamma_rejects_non_positive(x):
    with pytest.raises(UsageError):
        digamma(x)


def test_digamma_large_argument():
    # psi(x) ~ ln(x) - 1/(2x) pour x grand
    x = 1e6
    assert digamma(x) == pytest.approx(math.log(x) - 1 / (2 * x), abs=1e-10)


# ----------------------------
# Voisins et comptages (brut)
# ----------------------------

@pytest.mark.parametrize("points, row, k, expected", [
    ([0.0, 1.0, 3.0], 0, 1, 1.0),
    ([0.0, 1.0, 3.0], 0, 2, 3.0),
    ([[0, 0], [1, 5], [2, 1]], 0, 1, 2.0),
    ([[0, 0], [1, 5], [2, 1]], 0, 2, 5.0),
])
def test_kth_neighbor_distance(points, row, k, expected):
    assert kth_neighbor_distance(points, row, k) == expected


@pytest.mark.parametrize("k", [0, 3, 4])
def test_kth_neighbor_distance_rejects_bad_k(k):
    with pytest.raises(UsageError):
        kth_neighbor_distance([0.0, 1.0, 3.0], 0, k)


def test_kth_neighbor_distance_excludes_duplicates_of_self_only_once():
    # le point lui-même est exclu, pas ses doublons
    assert kth_neighbor_distance([0.0, 0.0, 2.0], 0, 1) == 0.0


@pytest.mark.parametrize("points, radius, strict, expected", [
    ([0.0, 0.4, 0.9, 2.0], 1.0, True, 2),
    ([0.0, 0.4, 0.9, 2.0], 0.1, True, 0),
    ([0.0, 0.4, 0.9, 2.0], 0.9, True, 1),
    ([0.0, 0.4, 0.9, 2.0], 0.9, False, 2),
    ([0.0, 0.0, 0.0, 2.0], 1e-9, True, 2),
])
def test_count_within(points, radius, strict, expected):
    assert count_within(points, 0, radius, strict) == expected


@pytest.mark.parametrize("radius", [0.0, -1.0])
def test_count_within_rejects_non_positive_radius(radius):
    with pytest.raises(UsageError):
        count_within([0.0, 1.0], 0, radius)


# --------------
# estimate_mi
# --------------

@pytest.mark.parametrize("rho", [0.0, 0.5, 0.9])
def test_gaussian_oracle(rho):
    oracle = -0.5 * math.log(1 - rho**2)
    hits = 0
    for seed in range(50):
        data = gaussian_pair(rho, 2000, seed)
        value = estimate_mi(data, None, MIQuery((0,), 6)).value
        hits += abs(value - oracle) <= 0.1
    assert hits >= 48


def test_independent_uniforms_near_zero():
    rng = make_rng(11)
    data = Dataset(rng.uniform(size=(2000, 1)), rng.uniform(size=2000), ("X1",))
    assert estimate_mi(data, None, MIQuery((0,), 6)).value == pytest.approx(0.0, abs=0.05)


def test_null_mean_over_replicates():
    values = []
    for seed in range(50):
        rng = make_rng(1000 + seed)
        x, y = rng.uniform(size=1000), rng.uniform(size=1000)
        values.append(mi_from_arrays(x, y, 6))
    assert np.mean(values) == pytest.approx(0.0, abs=0.02)


def test_value_may_be_negative_and_is_not_clamped():
    values = []
    for seed in range(20):
        rng = make_rng(seed)
        values.append(mi_from_arrays(rng.uniform(size=200), rng.uniform(size=200), 3))
    assert min(values) < 0.0


def test_n_used_is_row_count():
    data = gaussian_pair(0.5, 300, 1)
    rows = np.arange(0, 300, 2)
    estimate = estimate_mi(data, rows, MIQuery((0,), 4))
    assert estimate.n_used == 150
    assert math.isfinite(estimate.value)


def test_estimate_uses_only_given_rows():
    data = gaussian_pair(0.9, 400, 2)
    rows = np.arange(200)
    sub = Dataset(data.features[:200], data.target[:200], data.names)
    assert estimate_mi(data, rows, MIQuery((0,), 5)).value == estimate_mi(sub, None, MIQuery((0,), 5)).value


def test_row_permutation_invariance():
    rng = make_rng(3)
    x = rng.standard_normal((500, 2))
    y = x[:, 0] + 0.5 * rng.standard_normal(500)
    order = rng.permutation(500)
    direct = mi_from_arrays(x, y, 5)
    shuffled = mi_from_arrays(x[order], y[order], 5)
    assert shuffled == pytest.approx(direct, abs=1e-12)


def test_translation_and_joint_scale_invariance_exact():
    # grille dyadique : translation et facteur 2 sont exacts en flottant
    rng = make_rng(4)
    x = rng.integers(0, 1024, size=(400, 2)) / 1024
    y = (x[:, 0] + rng.integers(0, 256, size=400) / 1024)
    base = mi_from_arrays(x, y, 5, standardize=False)
    moved = mi_from_arrays(2.0 * (x + [3.0, -5.0]), 2.0 * (y + 7.0), 5, standardize=False)
    assert moved == base


def test_translation_and_joint_scale_invariance_standardized():
    rng = make_rng(5)
    x = rng.standard_normal((400, 2))
    y = np.sin(x[:, 0]) + 0.3 * rng.standard_normal(400)
    base = mi_from_arrays(x, y, 5)
    moved = mi_from_arrays(3.5 * (x + [10.0, -2.0]), 3.5 * (y + 1.0), 5)
    assert moved == pytest.approx(base, abs=1e-9)


@pytest.mark.parametrize("seed, integer_data", [(0, False), (1, False), (2, True), (3, True)])
def test_kdtree_matches_brute_force(seed, integer_data):
    rng = make_rng(seed)
    if integer_data:
        # beaucoup d'égalités de distances et de points dupliqués
        x = rng.integers(0, 6, size=(300, 2)).astype(float)
        y = rng.integers(0, 6, size=300).astype(float)
    else:
        x = rng.standard_normal((300, 2))
        y = x[:, 1] + rng.standard_normal(300)
    for k in (1, 4, 10):
        fast = mi_from_arrays(x, y, k, standardize=False, method="kdtree")
        slow = mi_from_arrays(x, y, k, standardize=False, method="brute")
        assert fast == slow


def test_constant_column_gives_near_zero():
    rng = make_rng(6)
    x = np.full(500, 2.5)
    y = rng.standard_normal(500)
    assert abs(mi_from_arrays(x, y, 5)) < 0.05


def test_rejects_empty_feature_set():
    with pytest.raises(UsageError):
        MIQuery((), 3)


def test_rejects_duplicate_features():
    with pytest.raises(UsageError):
        MIQuery((1, 1), 3)


def test_rejects_k_not_below_row_count():
    data = gaussian_pair(0.5, 50, 0)
    with pytest.raises(UsageError):
        estimate_mi(data, np.arange(5), MIQuery((0,), 5))


def test_rejects_out_of_range_feature():
    data = gaussian_pair(0.5, 50, 0)
    with pytest.raises(UsageError):
        estimate_mi(data, None, MIQuery((3,), 2))


def test_rejects_non_finite_arrays():
    x = np.array([0.0, 1.0, np.nan, 3.0])
    with pytest.raises(NonFiniteDataError):
        mi_from_arrays(x, np.arange(4.0), 1)
