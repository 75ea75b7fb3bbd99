"""penclust: penalized nonparametric clustering workbench.

Single-source and hierarchical (global/local) partition estimation under a
per-cluster penalty, lambda selection by cross-validation / silhouette /
Calinski-Harabasz, bag-of-words text encoding, ISOMAP dimension reduction,
planted-partition data generation, CSV/JSON storage, a job-running HTTP
service, and a batch CLI.
"""

from .dataset import Dataset, GroupedDataset
from .dpmeans import DpConfig, Partition, dp_means, objective, predict
from .errors import (
    DataError,
    GenerationError,
    GraphError,
    IntegrityError,
    SchemaError,
    UsageError,
    WorkbenchError,
)
from .gendata import GenConfig, GroupedGenConfig, generate_grouped, generate_single
from .hdpmeans import (
    HierConfig,
    HierPartition,
    LocalCluster,
    flatten,
    hdp_means,
    hier_objective,
)
from .io_store import (
    ResultArchive,
    Workspace,
    read_dataset,
    read_result,
    write_dataset,
    write_doc_term,
    write_embedding,
    write_result,
)
from .isomap import Embedding, NeighborGraph, classical_mds, geodesic_distances, isomap, knn_graph
from .selection import (
    LambdaGrid,
    SelectionReport,
    calinski_harabasz,
    cv_heldout_loss,
    select_lambda,
    silhouette_score,
)
from .text import (
    Corpus,
    DocTermMatrix,
    Vocabulary,
    build_vocabulary,
    encode,
    preprocess,
    read_corpus,
    read_stopwords,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "GroupedDataset",
    "DpConfig",
    "Partition",
    "dp_means",
    "objective",
    "predict",
    "HierConfig",
    "HierPartition",
    "LocalCluster",
    "hdp_means",
    "hier_objective",
    "flatten",
    "LambdaGrid",
    "SelectionReport",
    "silhouette_score",
    "calinski_harabasz",
    "cv_heldout_loss",
    "select_lambda",
    "Corpus",
    "Vocabulary",
    "DocTermMatrix",
    "preprocess",
    "build_vocabulary",
    "encode",
    "read_corpus",
    "read_stopwords",
    "NeighborGraph",
    "Embedding",
    "knn_graph",
    "geodesic_distances",
    "classical_mds",
    "isomap",
    "GenConfig",
    "GroupedGenConfig",
    "generate_single",
    "generate_grouped",
    "ResultArchive",
    "Workspace",
    "read_dataset",
    "write_dataset",
    "write_result",
    "read_result",
    "write_embedding",
    "write_doc_term",
    "WorkbenchError",
    "UsageError",
    "DataError",
    "SchemaError",
    "IntegrityError",
    "GraphError",
    "GenerationError",
]
