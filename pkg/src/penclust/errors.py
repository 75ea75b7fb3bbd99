"""Exception hierarchy shared across the workbench.

The CLI maps these onto process exit codes: usage errors exit 1, data
errors exit 2, graph/numeric errors exit 3.
"""


class WorkbenchError(Exception):
    """Base class for all penclust errors."""


class UsageError(WorkbenchError):
    """Caller supplied invalid parameters (bad grid, bad flag combination)."""


class DataError(WorkbenchError):
    """Input data is malformed, inconsistent, or unreadable."""


class SchemaError(DataError):
    """A serialized archive has the wrong schema version or is missing fields."""


class IntegrityError(DataError):
    """Workspace file contents do not match the recorded checksum."""


class GraphError(WorkbenchError):
    """Neighbor-graph problem, e.g. a disconnected k-NN graph."""


class GenerationError(WorkbenchError):
    """Synthetic-data mean placement failed within the retry budget."""
