"""Data generation: scale-free synthesis, anomaly injection, and sampling.

Four pieces feed the pipeline:

* `generate_ba` grows an undirected preferential-attachment network from a
  seed clique;
* `inject_anomalies` plants labeled fake vertices whose edge counts follow
  the host's empirical degree distribution and whose targets are uniform
  over the pre-injection vertex set;
* `sample_test_vertices` draws the inspected vertices and their edges,
  keeping only vertices observed well enough to judge (> min_friends
  qualifying neighbors, each itself with > min_friends neighbors);
* `build_link_training_set` pairs existing edges (label 0) with uniformly
  drawn non-existing pairs (label 1), never touching the test vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExhaustionError, ParameterError
from .features import extract_feature_matrix
from .forest import TrainingExample
from .graph import ANOMALOUS, Graph
from .rng import generator

# rejection loops give up after ATTEMPT_FACTOR * requested draws
ATTEMPT_FACTOR = 100


@dataclass(frozen=True)
class TestSet:
    """Vertices selected for inspection plus the edges that qualified them."""

    selected: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    labels: dict[int, int]

    @property
    def vertices(self) -> frozenset[int]:
        """Selected vertices and every endpoint of their returned edges."""
        endpoints = {w for e in self.edges for w in e}
        return frozenset(endpoints | set(self.selected))


@dataclass(frozen=True)
class InjectionRecord:
    """Audit trail of one `inject_anomalies` call."""

    injected: tuple[int, ...]
    edge_counts: tuple[int, ...]
    targets: tuple[tuple[int, ...], ...]


def generate_ba(n: int, m: int, seed) -> Graph:
    """Undirected preferential-attachment graph on `n` vertices.

    Starts from a clique of m+1 vertices; each arriving vertex attaches m
    edges to distinct existing vertices with probability proportional to
    current degree.
    """
    if m < 1:
        raise ParameterError(f"edges-per-new-vertex m must be >= 1, got {m}")
    if n <= m:
        raise ParameterError(f"need n > m, got n={n}, m={m}")
    rng = generator(seed)

    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    # each vertex appears once per unit of degree; sampling an index from
    # this list is sampling a vertex with probability proportional to degree
    repeated = []
    for u, v in edges:
        repeated.append(u)
        repeated.append(v)
    for source in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((t, source))
            repeated.append(t)
            repeated.append(source)

    width = len(str(n - 1))
    names = [f"v{i:0{width}d}" for i in range(n)]
    return Graph(names, np.array(edges, dtype=np.int64), directed=False)


def _fresh_names(g: Graph, count: int, prefix: str = "fake") -> list[str]:
    taken = set(g.names)
    names, i = [], 0
    width = len(str(max(count - 1, 1)))
    while len(names) < count:
        cand = f"{prefix}{i:0{width}d}"
        if cand not in taken:
            names.append(cand)
        i += 1
    return names


def inject_anomalies(g: Graph, n: int, seed) -> tuple[Graph, InjectionRecord]:
    """Add `n` anomalous vertices wired per the random-attacker model.

    Each new vertex draws its edge count from the host's empirical degree
    distribution (redrawing zeros: a zero-edge anomaly is invisible to any
    edge-aggregation score) and connects to that many distinct vertices
    sampled uniformly from the pre-injection vertex set.  Directed hosts
    get outbound edges from the fake vertex.
    """
    if g.vertex_count == 0:
        raise ParameterError("cannot inject into an empty graph")
    if n < 1:
        raise ParameterError(f"injection count must be >= 1, got {n}")
    if n > g.vertex_count:
        raise ParameterError(f"injection count {n} exceeds vertex count {g.vertex_count}")
    rng = generator(seed)

    host_n = g.vertex_count
    host_degrees = g.degrees("out" if g.directed else "all")
    new_edges = []
    edge_counts = []
    target_lists = []
    for i in range(n):
        vid = host_n + i
        k = 0
        while k == 0:
            k = int(host_degrees[int(rng.integers(host_n))])
        targets = rng.choice(host_n, size=k, replace=False)
        edge_counts.append(k)
        target_lists.append(tuple(int(t) for t in targets))
        for t in targets:
            new_edges.append((vid, int(t)))

    names = g.names + _fresh_names(g, n)
    labels = np.zeros(host_n + n, dtype=np.int8)
    if g.labels is not None:
        labels[:host_n] = g.labels
    labels[host_n:] = ANOMALOUS

    edges = np.array(new_edges, dtype=np.int64)
    if not g.directed:
        edges = np.sort(edges, axis=1)
    edges = np.concatenate([g.edges, edges])
    out = Graph(names, edges, g.directed, labels=labels)
    record = InjectionRecord(tuple(range(host_n, host_n + n)),
                             tuple(edge_counts), tuple(target_lists))
    return out, record


def sample_test_vertices(g: Graph, n: int, label_filter: int | None,
                         min_friends: int, seed) -> TestSet:
    """Accept `n` distinct vertices by rejection sampling.

    A uniformly drawn vertex is accepted when it matches `label_filter`
    (if given and the graph is labeled), has more than `min_friends`
    neighbors, and more than `min_friends` of those neighbors themselves
    have more than `min_friends` neighbors.  The edges to those qualifying
    neighbors are returned alongside the vertices.
    """
    if n < 1:
        raise ParameterError(f"requested vertex count must be >= 1, got {n}")
    rng = generator(seed)
    budget = ATTEMPT_FACTOR * n
    degrees = g.degrees("all")

    selected: list[int] = []
    chosen: set[int] = set()
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    labels: dict[int, int] = {}

    attempts = 0
    while len(selected) < n:
        if attempts >= budget:
            raise ExhaustionError(
                f"accepted {len(selected)}/{n} vertices after the {budget}-attempt "
                f"budget (100 x requested); constraints too strict for this graph")
        attempts += 1
        v = int(rng.integers(g.vertex_count))
        if v in chosen:
            continue
        if label_filter is not None and g.labels is not None and g.label_of(v) != label_filter:
            continue
        if degrees[v] <= min_friends:
            continue
        qualified = [int(u) for u in g.neighbors(v, "all") if degrees[u] > min_friends]
        if len(qualified) <= min_friends:
            continue
        selected.append(v)
        chosen.add(v)
        labels[v] = g.label_of(v)
        for u in qualified:
            e = (v, u) if g.directed else (min(v, u), max(v, u))
            if e not in seen_edges:
                seen_edges.add(e)
                edges.append(e)

    return TestSet(tuple(selected), tuple(edges), labels)


def sample_training_pairs(g: Graph, excluded, size_per_class: int, seed
                          ) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """(existing edges, non-existing pairs) for the link training set.

    Existing edges are drawn uniformly without replacement from E, which
    biases endpoints toward high degree.  Non-existing pairs are distinct
    and both endpoints are drawn uniformly.  Neither side touches a vertex
    in `excluded`.
    """
    if size_per_class < 0:
        raise ParameterError("size_per_class must be >= 0")
    if size_per_class == 0:
        return [], []
    rng = generator(seed)
    excluded = frozenset(excluded)

    mask = np.ones(len(g.edges), dtype=bool)
    if excluded:
        ex = np.fromiter(excluded, dtype=np.int64)
        mask = ~(np.isin(g.edges[:, 0], ex) | np.isin(g.edges[:, 1], ex))
    eligible = np.flatnonzero(mask)
    if len(eligible) < size_per_class:
        raise ExhaustionError(
            f"only {len(eligible)} existing edges avoid the {len(excluded)} "
            f"excluded vertices; need {size_per_class}")
    picked = eligible[rng.choice(len(eligible), size=size_per_class, replace=False)]
    negative_pairs = [(int(a), int(b)) for a, b in g.edges[picked]]

    budget = ATTEMPT_FACTOR * size_per_class
    positive_pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    attempts = 0
    while len(positive_pairs) < size_per_class:
        if attempts >= budget:
            raise ExhaustionError(
                f"found {len(positive_pairs)}/{size_per_class} non-existing pairs "
                f"after the {budget}-attempt budget (100 x requested)")
        attempts += 1
        v = int(rng.integers(g.vertex_count))
        u = int(rng.integers(g.vertex_count))
        if v == u or v in excluded or u in excluded:
            continue
        pair = (v, u) if g.directed else (min(v, u), max(v, u))
        if pair in seen or g.has_edge(v, u):
            continue
        seen.add(pair)
        positive_pairs.append(pair)

    return negative_pairs, positive_pairs


def build_link_training_set(g: Graph, excluded, size_per_class: int, seed
                            ) -> list[TrainingExample]:
    """Balanced link-classifier training set avoiding the excluded vertices.

    Label 0: existing edges ("negative": a real connection).  Label 1:
    non-existing pairs ("positive": the anomaly direction).  The returned
    list holds all negatives, then all positives; see
    :func:`sample_training_pairs` for the sampling rules.
    """
    negative_pairs, positive_pairs = sample_training_pairs(g, excluded,
                                                           size_per_class, seed)
    neg_X = extract_feature_matrix(g, negative_pairs)
    pos_X = extract_feature_matrix(g, positive_pairs)
    examples = [TrainingExample(row, 0) for row in neg_X]
    examples += [TrainingExample(row, 1) for row in pos_X]
    return examples
