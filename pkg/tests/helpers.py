"""Shared builders for the test suite."""

from __future__ import annotations

import math
import random

import numpy as np

from penclust import Dataset, GroupedDataset

# word pools for the synthetic corpus: three topics over a shared base
_BASE = [
    "data", "model", "method", "result", "value", "sample", "rate", "measure",
    "level", "study", "series", "index", "report", "survey", "table", "figure",
    "analysis", "estimate", "period", "change",
]
_TOPICS = [
    ["wage", "earnings", "pay", "salary", "income", "bonus", "hour", "overtime",
     "benefit", "pension"],
    ["price", "inflation", "cost", "consumer", "basket", "goods", "energy",
     "food", "housing", "fuel"],
    ["injury", "illness", "safety", "hazard", "workplace", "incident", "fatal",
     "exposure", "risk", "osha"],
]


def make_dataset(values, **kwargs) -> Dataset:
    return Dataset(values=np.asarray(values, dtype=float), **kwargs)


def make_grouped(values, group, **kwargs) -> GroupedDataset:
    return GroupedDataset(values=np.asarray(values, dtype=float), group=list(group), **kwargs)


def fixture_corpus(n_docs: int = 60, seed: int = 11) -> list[tuple[str, str]]:
    """Synthetic topic-structured corpus: (doc_id, text) pairs.

    Every document mixes shared base words with words from one topic pool, so
    documents cluster by topic but the k-NN graph stays connected.
    """
    rng = random.Random(seed)
    docs = []
    for i in range(n_docs):
        topic = i % len(_TOPICS)
        words = rng.choices(_BASE, k=30) + rng.choices(_TOPICS[topic], k=20)
        rng.shuffle(words)
        docs.append((f"doc{i:03d}.txt", " ".join(words)))
    return docs


def swiss_roll_lite(n: int = 200, seed: int = 5) -> np.ndarray:
    """A 2-D sheet rolled through one full turn in 3-D: small isomap surface."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.5 * math.pi, 2.5 * math.pi, size=n)
    height = 8.0 * rng.uniform(0.0, 1.0, size=n)
    x = t * np.cos(t)
    z = t * np.sin(t)
    return np.column_stack([x, height, z])


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    return float(np.corrcoef(a, b)[0, 1])


def upper_triangle(D: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(D.shape[0], k=1)
    return D[iu]
