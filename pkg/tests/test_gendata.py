"""Synthetic data generator: determinism, planted structure, recovery."""

import json
from itertools import combinations

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

import penclust.gendata as gendata
from penclust.dpmeans import DpConfig, dp_means
from penclust.errors import GenerationError, UsageError
from penclust.gendata import (
    GenConfig,
    GroupedGenConfig,
    generate_grouped,
    generate_single,
    truth_dict,
)
from penclust.hdpmeans import HierConfig, flatten, hdp_means


def test_sigma_zero_points_equal_means():
    cfg = GenConfig(k_true=3, n_per_cluster=4, d=2, separation=6.0, sigma=0.0, seed=5)
    data, labels, means = generate_single(cfg)
    assert data.values.shape == (12, 2)
    for i, lab in enumerate(labels):
        assert np.array_equal(data.values[i], means[lab])


def test_labels_are_cluster_major():
    cfg = GenConfig(k_true=3, n_per_cluster=(2, 3, 4), d=2, separation=5.0, sigma=1.0, seed=0)
    data, labels, means = generate_single(cfg)
    assert labels.tolist() == [0, 0, 1, 1, 1, 2, 2, 2, 2]
    assert data.values.shape == (9, 2)
    assert means.shape == (3, 2)


def test_seed_determinism():
    cfg = GenConfig(k_true=4, n_per_cluster=7, d=3, separation=4.0, sigma=0.5, seed=123)
    a_data, a_labels, a_means = generate_single(cfg)
    b_data, b_labels, b_means = generate_single(cfg)
    assert np.array_equal(a_data.values, b_data.values)
    assert np.array_equal(a_labels, b_labels)
    assert np.array_equal(a_means, b_means)
    c_data, _, _ = generate_single(
        GenConfig(k_true=4, n_per_cluster=7, d=3, separation=4.0, sigma=0.5, seed=124)
    )
    assert not np.array_equal(a_data.values, c_data.values)


@pytest.mark.parametrize("sigma", [0.0, 1.5])
def test_means_respect_separation(sigma):
    cfg = GenConfig(k_true=5, n_per_cluster=2, d=3, separation=3.0, sigma=sigma, seed=8)
    _, _, means = generate_single(cfg)
    floor = cfg.separation * sigma if sigma > 0 else cfg.separation
    for a, b in combinations(means, 2):
        assert np.linalg.norm(a - b) >= floor


def test_single_source_recovery():
    # well separated blobs: one fit at a mid-range penalty recovers the plant
    cfg = GenConfig(k_true=3, n_per_cluster=50, d=4, separation=8.0, sigma=1.0, seed=42)
    data, truth, _ = generate_single(cfg)
    part = dp_means(data, DpConfig(lam=30.0))
    assert part.k == 3
    assert adjusted_rand_score(truth, part.labels) >= 0.99


def test_grouped_sigma_zero_exact_recovery():
    cfg = GroupedGenConfig(
        k_true=2, n_per_cluster=5, d=3, separation=8.0, sigma=0.0, seed=3, groups=2
    )
    data, true_local, true_global, means = generate_grouped(cfg)
    assert sorted(set(data.group)) == ["g0", "g1"]
    hp = hdp_means(data, HierConfig(lam_global=2.0, lam_local=1.0))
    assert hp.k_global == 2
    assert {g: len(cs) for g, cs in hp.local.items()} == {"g0": 2, "g1": 2}
    assert adjusted_rand_score(true_global, flatten(hp).labels) == 1.0
    got = np.sort(hp.global_centroids, axis=0)
    want = np.sort(means, axis=0)
    assert np.allclose(got, want, atol=1e-12)


def test_grouped_usage_restriction():
    cfg = GroupedGenConfig(
        k_true=2, n_per_cluster=4, d=2, separation=5.0, sigma=0.0, seed=1,
        groups=2, usage=((0, 1), (1,)),
    )
    data, true_local, true_global, _ = generate_grouped(cfg)
    assert len(true_global) == 12  # g0 emits both clusters, g1 only one
    g1_globals = {int(v) for v, g in zip(true_global, data.group) if g == "g1"}
    assert g1_globals == {1}
    g0_globals = {int(v) for v, g in zip(true_global, data.group) if g == "g0"}
    assert g0_globals == {0, 1}


def test_grouped_probability_usage():
    cfg = GroupedGenConfig(
        k_true=2, n_per_cluster=10, d=2, separation=5.0, sigma=0.0, seed=9,
        groups=2, usage=((0.5, 0.5), (0.0, 1.0)),
    )
    data, _, true_global, _ = generate_grouped(cfg)
    # probability mode allocates n_per_cluster points per group in total
    for g in ("g0", "g1"):
        assert sum(1 for name in data.group if name == g) == 10
    g1_globals = {int(v) for v, g in zip(true_global, data.group) if g == "g1"}
    assert g1_globals == {1}


def test_grouped_recovery_with_noise():
    cfg = GroupedGenConfig(
        k_true=4, n_per_cluster=15, d=3, separation=8.0, sigma=1.0, seed=7, groups=3
    )
    data, _, true_global, _ = generate_grouped(cfg)
    hp = hdp_means(data, HierConfig(lam_global=20.0, lam_local=10.0))
    assert hp.k_global == 4
    assert adjusted_rand_score(true_global, flatten(hp).labels) >= 0.99


def test_placement_failure_raises(monkeypatch):
    monkeypatch.setattr(gendata, "_PLACEMENT_BUDGET", 1)
    cfg = GenConfig(k_true=2, n_per_cluster=1, d=2, separation=1.0, sigma=1.0, seed=0)
    with pytest.raises(GenerationError, match="smaller separation"):
        generate_single(cfg)


def test_grouped_placement_failure_raises(monkeypatch):
    monkeypatch.setattr(gendata, "_PLACEMENT_BUDGET", 1)
    cfg = GroupedGenConfig(
        k_true=2, n_per_cluster=1, d=2, separation=1.0, sigma=1.0, seed=0, groups=2
    )
    with pytest.raises(GenerationError, match="smaller separation"):
        generate_grouped(cfg)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(k_true=0, n_per_cluster=1, d=2, separation=1.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=1, d=0, separation=1.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=1, d=2, separation=0.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=1, d=2, separation=-3.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=1, d=2, separation=1.0, sigma=-0.1),
        dict(k_true=2, n_per_cluster=0, d=2, separation=1.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=(3,), d=2, separation=1.0, sigma=1.0),
        dict(k_true=2, n_per_cluster=(3, 0), d=2, separation=1.0, sigma=1.0),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(UsageError):
        GenConfig(**kwargs)


@pytest.mark.parametrize(
    "extra",
    [
        dict(groups=0),
        dict(groups=2, usage=((0, 1),)),  # one entry for two groups
        dict(groups=2, usage=((0, 1), ())),
        dict(groups=2, usage=((0, 1), (5,))),
        dict(groups=2, usage=((0, 1), (0.5,))),  # wrong probability length
        dict(groups=2, usage=((0, 1), (-0.5, 1.5))),
        dict(groups=2, usage=((0,), (0,))),  # cluster 1 never used
    ],
)
def test_grouped_config_validation(extra):
    base = dict(k_true=2, n_per_cluster=3, d=2, separation=2.0, sigma=1.0)
    with pytest.raises(UsageError):
        GroupedGenConfig(**base, **extra)


def test_truth_dict_is_json_ready():
    cfg = GroupedGenConfig(
        k_true=2, n_per_cluster=(3, 4), d=2, separation=5.0, sigma=0.0, seed=2,
        groups=2, usage=((0, 1), (1,)),
    )
    data, true_local, true_global, means = generate_grouped(cfg)
    doc = truth_dict(cfg, means, true_local=true_local, true_global=true_global)
    text = json.dumps(doc)  # must not choke on numpy types
    back = json.loads(text)
    assert back["config"]["k_true"] == 2
    assert back["config"]["n_per_cluster"] == [3, 4]
    assert back["config"]["usage"] == [[0, 1], [1]]
    assert back["true_global"] == [int(v) for v in true_global]
    assert len(back["true_means"]) == 2
