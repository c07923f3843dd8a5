"""Connected components of d-uniform hypergraphs.

The production path is a compiled union-find (union by size, path halving)
over the vertices of each edge.  ``components_oracle`` is an independent
breadth-first search on the vertex/edge incidence graph, kept for testing.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numba
import numpy as np

from ._combinatorics import comb
from ._errors import ParameterError
from .hypergraph import Hypergraph


@numba.njit(cache=True, nogil=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@numba.njit(cache=True, nogil=True)
def _union_find(n, edges):
    """Roots per vertex, root sizes and the running maximum size.

    ``edges`` holds 1-based vertex ids.
    """
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    largest = 1 if n > 0 else 0
    for i in range(edges.shape[0]):
        r0 = _find(parent, edges[i, 0] - 1)
        for j in range(1, edges.shape[1]):
            r1 = _find(parent, edges[i, j] - 1)
            if r0 == r1:
                continue
            if size[r0] < size[r1]:
                r0, r1 = r1, r0
            parent[r1] = r0
            size[r0] += size[r1]
            if size[r0] > largest:
                largest = size[r0]
    roots = np.empty(n, dtype=np.int64)
    for v in range(n):
        roots[v] = _find(parent, v)
    return roots, size, largest


@numba.njit(cache=True, nogil=True)
def _relabel(roots):
    """Component ids numbered by smallest vertex, plus sizes per id."""
    n = roots.shape[0]
    new_id = np.full(n, -1, dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    k = 0
    for v in range(n):
        r = roots[v]
        if new_id[r] < 0:
            new_id[r] = k
            k += 1
        labels[v] = new_id[r]
        counts[new_id[r]] += 1
    return labels, counts[:k]


def label_components(n: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex component ids (index 0 is vertex 1) and the size of each id.

    Ids are assigned in order of each component's smallest vertex.
    """
    rows = np.ascontiguousarray(edges, dtype=np.int64)
    if rows.ndim != 2:
        rows = rows.reshape(0, 2)
    roots, _, _ = _union_find(n, rows)
    return _relabel(roots)


def largest_order(h: Hypergraph) -> int:
    """L(H): order of the largest component, without building a summary."""
    _, _, largest = _union_find(h.n, np.ascontiguousarray(h.edges))
    return int(largest)


@dataclass(frozen=True, eq=False)
class ComponentSummary:
    labels: np.ndarray
    sizes: np.ndarray
    largest_order: int
    largest_vertices: tuple[int, ...]

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    @property
    def count(self) -> int:
        return int(self.sizes.shape[0])

    def component_of(self, v: int) -> tuple[int, ...]:
        lab = self.labels[v - 1]
        return tuple(int(u) + 1 for u in np.flatnonzero(self.labels == lab))

    def vertex_sets(self) -> list[tuple[int, ...]]:
        """All components as ascending vertex tuples, ordered by smallest vertex."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.count))
        out, start = [], 0
        for stop in bounds:
            out.append(tuple(int(u) + 1 for u in order[start:stop]))
            start = stop
        return out

    def same_partition(self, other: "ComponentSummary") -> bool:
        return (np.array_equal(self.labels, other.labels)
                and np.array_equal(self.sizes, other.sizes)
                and self.largest_order == other.largest_order
                and self.largest_vertices == other.largest_vertices)


def components(h: Hypergraph) -> ComponentSummary:
    labels, counts = label_components(h.n, h.edges)
    top = int(counts.max())
    in_top = np.flatnonzero(counts[labels] == top)
    grouped = in_top[np.argsort(labels[in_top], kind="stable")] + 1
    best = min(tuple(int(v) for v in grouped[i:i + top])
               for i in range(0, grouped.size, top))
    labels.setflags(write=False)
    sizes = np.sort(counts)[::-1].copy()
    sizes.setflags(write=False)
    return ComponentSummary(labels, sizes, top, best)


def largest_component(h: Hypergraph) -> tuple[int, tuple[int, ...]]:
    s = components(h)
    return s.largest_order, s.largest_vertices


def components_oracle(h: Hypergraph) -> ComponentSummary:
    """Breadth-first search over the bipartite vertex/edge incidence structure."""
    n = h.n
    edges = [tuple(int(v) for v in row) for row in h.edges]
    incident: list[list[int]] = [[] for _ in range(n + 1)]
    for ei, e in enumerate(edges):
        for v in e:
            incident[v].append(ei)
    comp_of = [0] * (n + 1)
    comps: list[list[int]] = []
    edge_seen = [False] * len(edges)
    for start in range(1, n + 1):
        if comp_of[start]:
            continue
        comps.append([])
        cid = len(comps)
        comp_of[start] = cid
        queue = deque([start])
        while queue:
            v = queue.popleft()
            comps[-1].append(v)
            for ei in incident[v]:
                if edge_seen[ei]:
                    continue
                edge_seen[ei] = True
                for w in edges[ei]:
                    if not comp_of[w]:
                        comp_of[w] = cid
                        queue.append(w)
    vertex_sets = [tuple(sorted(c)) for c in comps]
    ranked = sorted(vertex_sets, key=lambda c: (-len(c), c))
    labels = np.array([comp_of[v] - 1 for v in range(1, n + 1)], dtype=np.int64)
    sizes = np.array(sorted((len(c) for c in vertex_sets), reverse=True), dtype=np.int64)
    return ComponentSummary(labels, sizes, len(ranked[0]), ranked[0])


def _vertex_sets(n: int, sets: Iterable[Iterable[int]]) -> list[set[int]]:
    out = [set(int(v) for v in s) for s in sets]
    seen: set[int] = set()
    for s in out:
        if any(v < 1 or v > n for v in s):
            raise ParameterError(f"vertex out of range 1..{n}")
        if seen & s:
            raise ParameterError("vertex sets must be pairwise disjoint")
        seen |= s
    return out


def count_crossing_edges(n: int, d: int, *sets: Iterable[int]) -> int:
    """Number of d-subsets of 1..n meeting every given set, by inclusion/exclusion.

    >>> count_crossing_edges(6, 3, {1, 2}, {3})
    7
    """
    vs = _vertex_sets(n, sets)
    if not vs:
        return comb(n, d)
    sizes = [len(s) for s in vs]
    total = 0
    for r in range(len(sizes) + 1):
        for sub in combinations(sizes, r):
            total += (-1) ** r * comb(n - sum(sub), d)
    return total


def count_crossing_edges_bruteforce(n: int, d: int, *sets: Iterable[int]) -> int:
    vs = _vertex_sets(n, sets)
    return sum(1 for e in combinations(range(1, n + 1), d)
               if all(s.intersection(e) for s in vs))
