"""Independent brute-force implementations used as test oracles.

Everything here is deliberately naive (python sets, O(n^2) loops):
the implementations under test must agree with these, not share code
with them.
"""

from __future__ import annotations

import math
import statistics


def neighbor_sets(edges, directed, n):
    """Per-vertex {all, in, out, bi} neighbor sets from a raw edge list."""
    nin = {v: set() for v in range(n)}
    nout = {v: set() for v in range(n)}
    for a, b in edges:
        if a == b:
            continue
        nout[a].add(b)
        nin[b].add(a)
        if not directed:
            nout[b].add(a)
            nin[a].add(b)
    sets = {}
    for v in range(n):
        sets[v] = {
            "all": nin[v] | nout[v],
            "in": nin[v],
            "out": nout[v],
            "bi": nin[v] & nout[v],
        }
    return sets


def edge_features(edges, directed, n, v, u):
    """Feature name -> value for the pair (v, u), by literal set algebra."""
    sets = neighbor_sets(edges, directed, n)
    g_v, g_u = sets[v]["all"], sets[u]["all"]
    edge_set = set()
    for a, b in edges:
        if a == b:
            continue
        edge_set.add((a, b))
        if not directed:
            edge_set.add((b, a))

    def w(deg):
        return 1.0 / math.sqrt(1.0 + deg)

    out = {
        "total_friends": len(g_v | g_u),
        "jaccard": (len(g_v & g_u) / len(g_v | g_u)) if (g_v | g_u) else 0.0,
        "preferential_attachment": len(g_v) * len(g_u),
    }
    if directed:
        out["common_friends_in"] = len(sets[v]["in"] & sets[u]["in"])
        out["common_friends_out"] = len(sets[v]["out"] & sets[u]["out"])
        out["common_friends_bi"] = len(sets[v]["bi"] & sets[u]["bi"])
        out["common_friends"] = len(g_v & g_u)
        out["transitive_friends"] = len(sets[v]["out"] & sets[u]["in"])
        out["opposite_direction_friends"] = 1 if (u, v) in edge_set else 0
        wiv, wov = w(len(sets[v]["in"])), w(len(sets[v]["out"]))
        wiu, wou = w(len(sets[u]["in"])), w(len(sets[u]["out"]))
        out.update({
            "knnw1": wiv + wiu, "knnw2": wiv + wou,
            "knnw3": wov + wiu, "knnw4": wov + wou,
            "knnw5": wiv * wiu, "knnw6": wiv * wou,
            "knnw7": wov * wiu, "knnw8": wov * wou,
        })
    else:
        out["common_friends"] = len(g_v & g_u)
        out["adamic_adar"] = sum(
            1.0 / math.log(len(sets[wv]["all"]))
            for wv in g_v & g_u if len(sets[wv]["all"]) > 1)
        wv_, wu_ = w(len(g_v)), w(len(g_u))
        out["knnw9"] = wv_ + wu_
        out["knnw10"] = wv_ * wu_
    return out


def auc_pair_counting(scores, labels):
    """Fraction of correctly ordered (positive, negative) pairs, ties half."""
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def meta_features(ep, threshold):
    """The seven per-vertex statistics via the statistics module."""
    ep = list(ep)
    labels = [0 if p < threshold else 1 for p in ep]
    return {
        "abnormality_probability": statistics.mean(ep),
        "edges_probability_stdv": statistics.pstdev(ep),
        "sum_edge_label": sum(labels),
        "mean_predicted_link_label": sum(labels) / len(ep),
        "predicted_label_stdv": statistics.pstdev(labels),
        "edges_probability_median": statistics.median(ep),
        "edge_count": len(ep),
    }


def all_graphs(n, directed):
    """Every labeled graph on exactly n vertices (edge subsets)."""
    if directed:
        slots = [(a, b) for a in range(n) for b in range(n) if a != b]
    else:
        slots = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for mask in range(1 << len(slots)):
        yield [slots[i] for i in range(len(slots)) if mask >> i & 1]
