"""Per-vertex anomaly meta-features aggregated from edge scores.

The link classifier gives each edge of an inspected vertex a probability
of not existing; this module collapses those per-edge scores into seven
per-vertex statistics and ranks vertices by any of them.  A vertex with
many improbable edges floats to the top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyNeighborhoodError, ParameterError, ShapeError
from .features import extract_feature_matrix, feature_names
from .forest import LinkForest
from .graph import Graph

META_FEATURE_NAMES = (
    "abnormality_probability",
    "edges_probability_stdv",
    "sum_edge_label",
    "mean_predicted_link_label",
    "predicted_label_stdv",
    "edges_probability_median",
    "edge_count",
)

DIRECTION_MODES = ("out", "in", "all")


@dataclass(frozen=True)
class VertexAnomalyProfile:
    vertex: int
    abnormality_probability: float
    edges_probability_stdv: float
    sum_edge_label: int
    mean_predicted_link_label: float
    predicted_label_stdv: float
    edges_probability_median: float
    edge_count: int

    def value(self, name: str) -> float:
        if name not in META_FEATURE_NAMES:
            raise ParameterError(f"unknown meta-feature {name!r}; expected one of {META_FEATURE_NAMES}")
        return float(getattr(self, name))

    def as_row(self) -> np.ndarray:
        return np.array([self.value(name) for name in META_FEATURE_NAMES])


def edge_probabilities(forest: LinkForest, g: Graph, v: int,
                       mode: str = "out") -> list[tuple[int, float]]:
    """(neighbor, non-existence probability) for each edge of `v`.

    Directed graphs are scored on the inspected vertex's outbound edges by
    default (the attacker model creates outbound links); `mode` can widen
    that to inbound or all edges.  Undirected graphs always use Γ(v).
    """
    if mode not in DIRECTION_MODES:
        raise ParameterError(f"direction mode must be one of {DIRECTION_MODES}, got {mode!r}")
    if forest.feature_names is not None and forest.feature_names != feature_names(g.directed):
        raise ShapeError(
            "forest was trained on a different feature set than this graph mode provides")
    nbrs = g.neighbors(v, mode if g.directed else "all")
    if len(nbrs) == 0:
        raise EmptyNeighborhoodError(f"vertex {v} has no edges to score in mode {mode!r}")
    pairs = [(v, int(u)) for u in nbrs]
    probs = forest.predict_proba_many(extract_feature_matrix(g, pairs))
    return [(int(u), float(p)) for u, p in zip(nbrs, probs)]


def vertex_profile(ep: Sequence[float], threshold: float, v: int,
                   edge_count: int | None = None) -> VertexAnomalyProfile:
    """All seven meta-features from a vertex's edge-score list.

    An edge is labeled anomalous when its score reaches the threshold
    (boundary inclusive).  Standard deviations are population ones: the
    edge list is the whole population for this vertex, and a single edge
    must yield 0, not an undefined value.
    """
    values = np.asarray(ep, dtype=np.float64)
    if values.size == 0:
        raise EmptyNeighborhoodError(f"vertex {v} has an empty edge-probability set")
    if not 0 < threshold < 1:
        raise ParameterError(f"threshold must be in (0, 1), got {threshold}")
    if edge_count is None:
        edge_count = values.size
    labels = (values >= threshold).astype(np.float64)
    sum_label = int(labels.sum())
    return VertexAnomalyProfile(
        vertex=v,
        abnormality_probability=float(values.mean()),
        edges_probability_stdv=float(values.std()),
        sum_edge_label=sum_label,
        mean_predicted_link_label=sum_label / edge_count,
        predicted_label_stdv=float(labels.std()),
        edges_probability_median=float(np.median(values)),
        edge_count=int(edge_count),
    )


def profile_vertices(forest: LinkForest, g: Graph, vertices: Iterable[int],
                     threshold: float = 0.8, mode: str = "out"
                     ) -> tuple[list[VertexAnomalyProfile], list[int]]:
    """Profiles for each vertex, in the given order.

    Vertices with no edges in the chosen mode cannot be profiled; they are
    returned in the second list instead of failing the batch.
    """
    profiles, skipped = [], []
    for v in vertices:
        v = int(v)
        deg = g.degree(v, mode if g.directed else "all")
        if deg == 0:
            skipped.append(v)
            continue
        ep = [p for _, p in edge_probabilities(forest, g, v, mode)]
        profiles.append(vertex_profile(ep, threshold, v, deg))
    return profiles, skipped


def rank_vertices(profiles: Sequence[VertexAnomalyProfile], by: str,
                  order: str = "desc") -> list[int]:
    """Vertex ids sorted by one meta-feature; ties break by id ascending.

    Descending order puts the most anomalous first for probability-like
    features.
    """
    if by not in META_FEATURE_NAMES:
        raise ParameterError(f"unknown meta-feature {by!r}; expected one of {META_FEATURE_NAMES}")
    if order not in ("desc", "asc"):
        raise ParameterError(f"order must be 'desc' or 'asc', got {order!r}")
    sign = -1.0 if order == "desc" else 1.0
    return [p.vertex for p in sorted(profiles, key=lambda p: (sign * p.value(by), p.vertex))]
