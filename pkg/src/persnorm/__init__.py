"""Vietoris-Rips persistence (dimensions 0 and 1) and persistence norms of 2-D point clouds."""

from .bootstrap import ConfidenceBand, bootstrap_band, hausdorff_distance
from .correlate import CorrelationTable, MetricsMatrix, correlation_table, spearman
from .datasets import DatasetBundle, gen_normal, load_fixtures, load_tsv, write_tsv
from .errors import PersnormError
from .norms import (
    DatasetReport,
    EssentialPolicy,
    NormsConfig,
    PersistenceNorms,
    compute_norms,
    norms_table,
)
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    compute_diagram,
    compute_h0,
    compute_h1,
    naive_reduction_oracle,
)
from .rips import AUTO, FilteredComplex, FiltrationSimplex, build_rips, distance_matrix
from .stats import PointCloud, SummaryStats, max_pair_distance, pearson, summarize
from .transforms import SweepResult, TransformKind, TransformSpec, apply_transform, run_sweep

__all__ = [
    "AUTO", "ConfidenceBand", "CorrelationTable", "DatasetBundle", "DatasetReport",
    "EssentialPolicy", "FilteredComplex", "FiltrationSimplex", "MetricsMatrix", "NormsConfig",
    "PersistenceDiagram", "PersistenceNorms", "PersistencePair", "PersnormError", "PointCloud",
    "SummaryStats", "SweepResult", "TransformKind", "TransformSpec", "apply_transform",
    "bootstrap_band", "build_rips", "compute_diagram", "compute_h0", "compute_h1",
    "compute_norms", "correlation_table", "distance_matrix", "gen_normal", "hausdorff_distance",
    "load_fixtures", "load_tsv", "max_pair_distance", "naive_reduction_oracle", "norms_table",
    "pearson", "run_sweep", "spearman", "summarize", "write_tsv",
]
