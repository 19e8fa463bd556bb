import numpy as np
import pytest

from linkanomaly import build_graph


@pytest.fixture
def triangle():
    return build_graph([("v", "u"), ("u", "w"), ("v", "w")], directed=False)


@pytest.fixture
def small_directed():
    # v -> u, u -> v, v -> a, a -> u
    return build_graph([("v", "u"), ("u", "v"), ("v", "a"), ("a", "u")], directed=True)


def random_graph(rng: np.random.Generator, n: int, directed: bool, p: float = 0.35):
    """Random name-labeled edge list with at least one edge."""
    edges = []
    for a in range(n):
        for b in range(n):
            if a == b or (not directed and a > b):
                continue
            if rng.random() < p:
                edges.append((a, b))
    if not edges:
        edges = [(0, 1 % n if n > 1 else 0)]
    names = [f"n{i}" for i in range(n)]
    return [(names[a], names[b]) for a, b in edges], edges
