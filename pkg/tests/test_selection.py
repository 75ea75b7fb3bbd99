import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import calinski_harabasz_score as sk_ch
from sklearn.metrics import silhouette_score as sk_sil

from helpers import make_dataset
from penclust import (
    DataError,
    DpConfig,
    LambdaGrid,
    UsageError,
    calinski_harabasz,
    cv_heldout_loss,
    select_lambda,
    silhouette_score,
)

FOUR_POINTS = make_dataset([[0.0], [1.0], [10.0], [11.0]])
FOUR_LABELS = np.array([0, 0, 1, 1])


def test_silhouette_hand_value():
    # a = 1; b = (10 + 11)/2 or (9 + 10)/2; mean of (b - a)/b over the 4 points
    expected = (9.5 / 10.5 + 8.5 / 9.5) / 2
    s = silhouette_score(FOUR_POINTS, FOUR_LABELS)
    assert s == pytest.approx(0.899749, abs=1e-6)
    assert s == pytest.approx(expected, abs=1e-12)
    assert s == pytest.approx(sk_sil(FOUR_POINTS.values, FOUR_LABELS), abs=1e-12)


def test_silhouette_two_singletons_zero():
    s = silhouette_score(make_dataset([[0.0], [1.0]]), [0, 1])
    assert s == 0.0


def test_silhouette_scale_invariant():
    a = silhouette_score(FOUR_POINTS, FOUR_LABELS)
    scaled = make_dataset(FOUR_POINTS.values * 37.5)
    assert silhouette_score(scaled, FOUR_LABELS) == a


def test_silhouette_single_cluster_undefined():
    assert silhouette_score(FOUR_POINTS, [0, 0, 0, 0]) is None


def test_ch_hand_value():
    ch = calinski_harabasz(FOUR_POINTS, FOUR_LABELS)
    assert ch == pytest.approx(200.0, abs=1e-9)
    assert ch == pytest.approx(sk_ch(FOUR_POINTS.values, FOUR_LABELS), abs=1e-9)


def test_ch_collapsed_clusters_infinite():
    data = make_dataset([[0.0], [0.0], [5.0], [5.0]])
    assert calinski_harabasz(data, [0, 0, 1, 1]) == math.inf


def test_ch_translation_invariant():
    a = calinski_harabasz(FOUR_POINTS, FOUR_LABELS)
    shifted = make_dataset(FOUR_POINTS.values + 123.25)
    assert calinski_harabasz(shifted, FOUR_LABELS) == a


def test_ch_undefined_for_degenerate_k():
    assert calinski_harabasz(FOUR_POINTS, [0, 0, 0, 0]) is None
    assert calinski_harabasz(FOUR_POINTS, [0, 1, 2, 3]) is None


def test_cv_zero_lambda_zero_loss():
    rng = np.random.default_rng(0)
    data = make_dataset(rng.normal(size=(20, 2)))
    assert cv_heldout_loss(data, 0.0, 4, DpConfig(lam=0.0)) == 0.0


def test_cv_sigma_zero_blobs_zero_loss():
    # exact duplicates at two sites: every held-out point coincides with a
    # training centroid, so the capped per-point cost is 0
    X = np.array([[0.0, 0.0]] * 6 + [[8.0, 8.0]] * 6)
    data = make_dataset(X)
    loss = cv_heldout_loss(data, 9.0, 3, DpConfig(lam=9.0, seed=4))
    assert loss == 0.0


def test_cv_single_blob_huge_lambda_matches_direct_computation():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(15, 2))
    data = make_dataset(X)
    lam, folds, seed = 1e6, 5, 7
    loss = cv_heldout_loss(data, lam, folds, DpConfig(lam=lam, seed=seed))

    perm = np.random.default_rng(seed).permutation(15)
    parts = np.array_split(perm, folds)
    expected = []
    for f in range(folds):
        held = parts[f]
        train = np.concatenate([parts[g] for g in range(folds) if g != f])
        mu = X[train].mean(axis=0)
        expected.extend(((X[held] - mu) ** 2).sum(axis=1).tolist())
    assert loss == pytest.approx(float(np.mean(expected)), abs=1e-12)


def test_cv_loss_never_exceeds_lambda():
    rng = np.random.default_rng(2)
    for _ in range(5):
        data = make_dataset(rng.normal(size=(12, 2)) * rng.uniform(0.5, 20))
        lam = float(rng.uniform(0.01, 5.0))
        assert cv_heldout_loss(data, lam, 3, DpConfig(lam=lam)) <= lam + 1e-12


def test_cv_requires_enough_rows():
    with pytest.raises(DataError):
        cv_heldout_loss(make_dataset([[0.0], [1.0]]), 1.0, 5, DpConfig(lam=1.0))


def test_grid_validation():
    with pytest.raises(UsageError):
        LambdaGrid(())
    with pytest.raises(UsageError):
        LambdaGrid((3.0, 2.0))
    with pytest.raises(UsageError):
        LambdaGrid((1.0, 1.0))
    with pytest.raises(UsageError):
        LambdaGrid((-1.0, 2.0))
    assert LambdaGrid.linear(1, 50, 25).values[0] == 1.0
    assert LambdaGrid.linear(1, 50, 25).values[-1] == 50.0
    assert len(LambdaGrid.linear(1, 50, 25).values) == 25


def well_separated_blobs(seed=3):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [30.0, 0.0], [0.0, 30.0]])
    return make_dataset(np.vstack([c + rng.normal(size=(20, 2)) for c in centers]))


@pytest.mark.parametrize("method", ["silhouette", "calinski_harabasz"])
def test_select_recovers_three_blobs(method):
    data = well_separated_blobs()
    grid = LambdaGrid.linear(2, 200, 12)
    report = select_lambda(data, method, grid, DpConfig(lam=0.0, seed=0))
    assert report.chosen_k == 3
    assert report.chosen_lambda in grid.values
    assert report.method == method


def test_select_cv_recovers_three_blobs_on_true_range_grid():
    # held-out loss is capped at lambda per point, so it grows with lambda
    # wherever extra clusters genuinely fit held-out points better; cv is
    # informative on grids spanning the range where the true K is optimal
    data = well_separated_blobs()
    grid = LambdaGrid.linear(60, 200, 8)
    report = select_lambda(data, "cv", grid, DpConfig(lam=0.0, seed=0))
    assert report.chosen_k == 3


def test_select_cv_wide_grid_sits_at_the_floor():
    # documented degeneracy of the capped loss: on a grid reaching into the
    # overfit zone, smaller lambda gives smaller held-out loss
    data = well_separated_blobs()
    grid = LambdaGrid.linear(2, 200, 12)
    report = select_lambda(data, "cv", grid, DpConfig(lam=0.0, seed=0))
    assert report.chosen_lambda == 2.0
    defined = [s for s in report.scores if s is not None]
    assert report.scores[0] == min(defined)


def test_select_single_value_grid():
    data = well_separated_blobs()
    report = select_lambda(data, "ch", LambdaGrid((40.0,)), DpConfig(lam=0.0))
    assert report.chosen_lambda == 40.0


def test_select_all_k1_fallback_largest_lambda():
    data = make_dataset([[0.0], [0.1], [0.2], [0.3]])
    grid = LambdaGrid((50.0, 80.0, 120.0))
    report = select_lambda(data, "silhouette", grid, DpConfig(lam=0.0))
    assert report.k_per_lambda == [1, 1, 1]
    assert report.scores == [None, None, None]
    assert report.chosen_lambda == 120.0


def test_select_tie_prefers_largest_lambda():
    # duplicate points give bit-identical partitions (and scores) at both
    # penalties, forcing an exact tie
    data = make_dataset([[0.0]] * 4 + [[10.0]] * 4)
    grid = LambdaGrid((2.0, 3.0))
    report = select_lambda(data, "sil", grid, DpConfig(lam=0.0))
    assert report.k_per_lambda == [2, 2]
    assert report.scores[0] == report.scores[1]
    assert report.chosen_lambda == 3.0


def test_select_cv_minimizes():
    data = well_separated_blobs()
    grid = LambdaGrid.linear(2, 200, 8)
    report = select_lambda(data, "cv", grid, DpConfig(lam=0.0, seed=0))
    defined = [s for s in report.scores if s is not None]
    chosen_score = report.scores[list(grid.values).index(report.chosen_lambda)]
    assert chosen_score == min(defined)


def test_select_sil_and_ch_maximize():
    data = well_separated_blobs()
    grid = LambdaGrid.linear(2, 200, 8)
    for method in ("sil", "ch"):
        report = select_lambda(data, method, grid, DpConfig(lam=0.0))
        defined = [s for s in report.scores if s is not None]
        chosen_score = report.scores[list(grid.values).index(report.chosen_lambda)]
        assert chosen_score == max(defined)


def test_method_aliases_and_unknown():
    data = well_separated_blobs()
    grid = LambdaGrid((40.0,))
    assert select_lambda(data, "sil", grid, DpConfig(lam=0.0)).method == "silhouette"
    assert select_lambda(data, "ch", grid, DpConfig(lam=0.0)).method == "calinski_harabasz"
    with pytest.raises(UsageError):
        select_lambda(data, "bic", grid, DpConfig(lam=0.0))


def test_progress_hook_reports_completion():
    data = well_separated_blobs()
    grid = LambdaGrid.linear(5, 100, 4)
    seen = []
    select_lambda(data, "ch", grid, DpConfig(lam=0.0), on_progress=seen.append)
    assert seen == pytest.approx([0.25, 0.5, 0.75, 1.0])


@settings(max_examples=30, deadline=None)
@given(
    pts=st.lists(
        st.tuples(st.floats(-20, 20, width=64), st.floats(-20, 20, width=64)),
        min_size=4, max_size=12,
    ),
    split=st.integers(1, 3),
)
def test_silhouette_bounds(pts, split):
    X = np.asarray(pts)
    labels = np.arange(len(pts)) % (split + 1)
    s = silhouette_score(make_dataset(X), labels)
    if s is not None:
        assert -1.0 - 1e-12 <= s <= 1.0 + 1e-12


@settings(max_examples=30, deadline=None)
@given(
    pts=st.lists(
        st.tuples(st.floats(-20, 20, width=64), st.floats(-20, 20, width=64)),
        min_size=4, max_size=12,
    ),
)
def test_ch_nonnegative(pts):
    X = np.asarray(pts)
    labels = np.arange(len(pts)) % 2
    ch = calinski_harabasz(make_dataset(X), labels)
    if ch is not None and not math.isinf(ch):
        assert ch >= 0.0
