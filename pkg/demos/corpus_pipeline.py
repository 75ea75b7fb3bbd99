"""Document clustering end to end: encode, embed, pick a penalty, cluster.

Builds a synthetic 60-document corpus mixing shared vocabulary with three
topic pools, encodes it two ways (raw counts and binary presence), embeds
each matrix with the geodesic pipeline, and clusters the embedded points
with a penalty chosen by the Calinski-Harabasz statistic.

Run: python3 demos/corpus_pipeline.py
"""

import random

import numpy as np

from penclust.dataset import Dataset
from penclust.dpmeans import DpConfig, dp_means
from penclust.isomap import isomap
from penclust.selection import LambdaGrid, select_lambda
from penclust.text import Corpus, build_vocabulary, encode

BASE = [f"field{i}" for i in range(20)]
TOPICS = [
    [f"model{i}" for i in range(10)],
    [f"survey{i}" for i in range(10)],
    [f"policy{i}" for i in range(10)],
]


def synth_corpus(n_docs: int = 60, seed: int = 11) -> Corpus:
    rng = random.Random(seed)
    docs = []
    for i in range(n_docs):
        words = rng.choices(BASE, k=30) + rng.choices(TOPICS[i % 3], k=20)
        rng.shuffle(words)
        docs.append((f"doc{i:03d}", " ".join(words)))
    return Corpus(documents=docs)


def main() -> None:
    corpus = synth_corpus()
    vocab = build_vocabulary(corpus)
    print(f"corpus: {len(corpus.documents)} docs, vocabulary {len(vocab)} terms")

    for encoding, m in (("raw", 4), ("binary", 3)):
        dtm = encode(corpus, vocab, encoding=encoding)
        # 20 docs share each topic, so k=21 guarantees cross-topic edges
        emb = isomap(dtm.to_dataset(), k=21, m=m)
        points = Dataset(values=emb.coords, row_ids=list(emb.row_ids))

        spread = float(np.mean(np.sum((points.values - points.values.mean(0)) ** 2, axis=1)))
        grid = LambdaGrid.linear(spread / 2, spread * 4, 8)
        report = select_lambda(points, "calinski_harabasz", grid, DpConfig(lam=1.0))
        partition = dp_means(points, DpConfig(lam=report.chosen_lambda))

        print()
        print(f"[{encoding}] embedded to m={m}, eigenvalue share "
              f"{np.round(emb.eigenvalues / emb.eigenvalues.sum(), 2)}")
        print(f"[{encoding}] chose lambda {report.chosen_lambda:.1f} -> K={partition.k}, "
              f"sizes {sorted(partition.sizes.tolist(), reverse=True)}")

        # how well do clusters line up with the planted topics?
        topics = np.array([i % 3 for i in range(len(corpus.documents))])
        purity = 0
        for lab in range(partition.k):
            members = topics[partition.labels == lab]
            purity += np.bincount(members).max()
        print(f"[{encoding}] topic purity: {purity}/{len(topics)}")


if __name__ == "__main__":
    main()
