"""Small graph construction helpers shared by the tests."""
from __future__ import annotations

from probcore.graph import ProbabilisticGraph, from_edges


def clique(n_vertices: int, p: float = 1.0, offset: int = 0) -> list[tuple[int, int, float]]:
    """Edge triples of a complete graph on labels offset..offset+n-1."""
    edges = []
    for i in range(n_vertices):
        for j in range(i + 1, n_vertices):
            edges.append((offset + i, offset + j, p))
    return edges


def graph_of(edges, n: int | None = None) -> ProbabilisticGraph:
    """Graph from (u, v, p) triples with consecutive integer labels."""
    top = max((max(u, v) for u, v, _ in edges), default=-1) + 1
    n = top if n is None else max(n, top)
    tokens = [str(i) for i in range(n)]
    us = [u for u, _, _ in edges]
    vs = [v for _, v, _ in edges]
    ps = [p for _, _, p in edges]
    return from_edges(tokens, us, vs, ps)
