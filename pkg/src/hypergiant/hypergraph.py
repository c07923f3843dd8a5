"""d-uniform hypergraphs on vertices 1..n, edge families and exact samplers.

Edges are stored as an ``(m, d)`` int64 array of 1-based vertex ids, each
row ascending and the rows in lexicographic order.  Samplers never iterate
over all C(n, d) candidate edges: they draw the edge count from the
binomial distribution and then that many distinct uniform members of the
family, which has the same law as independent Bernoulli trials.
"""
from __future__ import annotations

import io
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._combinatorics import comb, sample_binomial
from ._errors import HGFormatError, ParameterError
from ._validation import check_edge_size, check_probability
from .rng import make_rng

# families up to this size are enumerated outright when most members are drawn
ENUMERATE_LIMIT = 1 << 22


def edge_keys(rows: np.ndarray, n: int) -> np.ndarray | None:
    """Injective int64 code of each ascending row, or None if n**d overflows."""
    d = rows.shape[1]
    if n ** d >= (1 << 63):
        return None
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(d):
        keys = keys * n + (rows[:, j] - 1)
    return keys


def _lex_order(rows: np.ndarray, n: int) -> np.ndarray:
    keys = edge_keys(rows, n)
    if keys is not None:
        return np.argsort(keys, kind="stable")
    return np.lexsort(rows.T[::-1])


def _first_unique(rows: np.ndarray, n: int) -> np.ndarray:
    """Indices of first occurrences of each distinct row, in draw order."""
    keys = edge_keys(rows, n)
    if keys is not None:
        _, idx = np.unique(keys, return_index=True)
    else:
        _, idx = np.unique(rows, axis=0, return_index=True)
    idx.sort()
    return idx


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Immutable d-uniform hypergraph with vertex set {1, ..., n}."""

    d: int
    n: int
    edges: np.ndarray

    def __post_init__(self):
        check_edge_size(self.n, self.d)
        rows = np.array(self.edges, dtype=np.int64, copy=True)
        if rows.size == 0:
            rows = rows.reshape(0, self.d)
        if rows.ndim != 2 or rows.shape[1] != self.d:
            raise ParameterError(f"edges must have shape (m, {self.d})")
        rows.sort(axis=1)
        if rows.shape[0]:
            if rows.min() < 1 or rows.max() > self.n:
                raise ParameterError(f"edge vertex out of range 1..{self.n}")
            if self.d > 1 and np.any(rows[:, 1:] == rows[:, :-1]):
                raise ParameterError("edge with repeated vertex")
        rows = rows[_lex_order(rows, self.n)]
        if rows.shape[0] > 1 and np.any(np.all(rows[1:] == rows[:-1], axis=1)):
            raise ParameterError("duplicate edge")
        rows.setflags(write=False)
        object.__setattr__(self, "edges", rows)

    @classmethod
    def _trusted(cls, n: int, d: int, rows: np.ndarray) -> "Hypergraph":
        # rows already validated, row-sorted and distinct; only lex order is applied
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, d)
        rows = rows[_lex_order(rows, n)]
        rows.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "d", d)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", rows)
        return obj

    @classmethod
    def empty(cls, n: int, d: int) -> "Hypergraph":
        return cls(d=d, n=n, edges=np.zeros((0, d), dtype=np.int64))

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def __len__(self) -> int:
        return self.m

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.edges:
            yield tuple(int(v) for v in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.d == other.d and self.n == other.n
                and np.array_equal(self.edges, other.edges))

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Hypergraph(d={self.d}, n={self.n}, m={self.m})"

    def edge_set(self) -> set[tuple[int, ...]]:
        return set(iter(self))

    def keys(self) -> np.ndarray | None:
        return edge_keys(self.edges, self.n)

    def add_edges(self, rows: np.ndarray, *, skip_present: bool = False) -> "Hypergraph":
        """Return a new hypergraph with ``rows`` added.

        With ``skip_present`` edges already in ``self`` are silently dropped;
        otherwise a collision is an error.
        """
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.d)
        if skip_present:
            rows = rows[~self.contains_rows(rows)]
        return Hypergraph(d=self.d, n=self.n, edges=np.concatenate([self.edges, rows]))

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.sort(np.asarray(rows, dtype=np.int64).reshape(-1, self.d), axis=1)
        mine = self.keys()
        if mine is not None:
            return np.isin(edge_keys(rows, self.n), mine)
        present = self.edge_set()
        return np.array([tuple(int(v) for v in r) in present for r in rows], dtype=bool)


# ---------------------------------------------------------------- .hg format

def format_hg(h: Hypergraph) -> str:
    lines = [f"HG {h.d} {h.n} {h.m}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in h.edges)
    return "\n".join(lines) + "\n"


def parse_hg(text: str) -> Hypergraph:
    """Parse the ``.hg`` text format; any deviation raises HGFormatError."""
    if "\r" in text:
        raise HGFormatError("line endings must be LF")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise HGFormatError("empty file")
    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != "HG":
        raise HGFormatError("header must be 'HG <d> <n> <m>'")
    try:
        d, n, m = (int(x) for x in head[1:])
    except ValueError:
        raise HGFormatError("header fields must be integers") from None
    if d < 2 or n < d or m < 0:
        raise HGFormatError(f"invalid header values d={d} n={n} m={m}")
    body = lines[1:]
    if len(body) != m:
        raise HGFormatError(f"header announces {m} edges, found {len(body)}")
    rows = np.zeros((m, d), dtype=np.int64)
    prev: tuple[int, ...] | None = None
    for i, line in enumerate(body, start=2):
        parts = line.split(" ")
        if len(parts) != d:
            raise HGFormatError(f"line {i}: expected {d} vertices")
        try:
            edge = tuple(int(x) for x in parts)
        except ValueError:
            raise HGFormatError(f"line {i}: non-integer vertex") from None
        if any(v < 1 or v > n for v in edge):
            raise HGFormatError(f"line {i}: vertex out of range 1..{n}")
        if any(a >= b for a, b in zip(edge, edge[1:])):
            raise HGFormatError(f"line {i}: vertices must be strictly ascending")
        if prev is not None:
            if edge == prev:
                raise HGFormatError(f"line {i}: duplicate edge")
            if edge < prev:
                raise HGFormatError(f"line {i}: edges not in lexicographic order")
        prev = edge
        rows[i - 2] = edge
    return Hypergraph._trusted(n, d, rows)


def write_hg(h: Hypergraph, path) -> None:
    if isinstance(path, io.TextIOBase):
        path.write(format_hg(h))
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_hg(h))


def read_hg(path: str | os.PathLike) -> Hypergraph:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_hg(fh.read())


# ------------------------------------------------------------- edge families

def _as_vertex_tuple(vs: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(int(v) for v in vs))
    if len(set(out)) != len(out):
        raise ParameterError("vertex set contains repeats")
    return out


@dataclass(frozen=True)
class EdgeFamily:
    """A set of candidate d-sets described by how they meet given vertex sets.

    ``all``          every d-subset of 1..n
    ``inside``       d-subsets of ``sets[0]``
    ``crossing``     d-subsets of ``sets[0] | sets[1]`` meeting both
    ``meeting_all``  d-subsets of 1..n meeting every set in ``sets``
    ``pattern``      exactly ``counts[i]`` vertices from ``sets[i]``, nothing else
    """

    kind: str
    sets: tuple[tuple[int, ...], ...] = ()
    counts: tuple[int, ...] = ()

    @classmethod
    def all(cls) -> "EdgeFamily":
        return cls("all")

    @classmethod
    def inside(cls, s: Iterable[int]) -> "EdgeFamily":
        return cls("inside", (_as_vertex_tuple(s),))

    @classmethod
    def crossing(cls, a: Iterable[int], b: Iterable[int]) -> "EdgeFamily":
        fam = cls("crossing", (_as_vertex_tuple(a), _as_vertex_tuple(b)))
        fam._check_disjoint()
        return fam

    @classmethod
    def meeting_all(cls, *sets: Iterable[int]) -> "EdgeFamily":
        fam = cls("meeting_all", tuple(_as_vertex_tuple(s) for s in sets))
        fam._check_disjoint()
        return fam

    @classmethod
    def pattern(cls, parts: Sequence[tuple[Iterable[int], int]]) -> "EdgeFamily":
        fam = cls("pattern", tuple(_as_vertex_tuple(s) for s, _ in parts),
                  tuple(int(k) for _, k in parts))
        fam._check_disjoint()
        return fam

    def _check_disjoint(self):
        seen: set[int] = set()
        for s in self.sets:
            if seen.intersection(s):
                raise ParameterError("vertex sets must be pairwise disjoint")
            seen.update(s)

    def _check_range(self, n: int):
        for s in self.sets:
            if s and (s[0] < 1 or s[-1] > n):
                raise ParameterError(f"vertex out of range 1..{n}")

    def blocks(self, n: int, d: int) -> list[tuple[np.ndarray, int, int]]:
        """Disjoint vertex blocks with (min, max) vertices an edge takes from each."""
        self._check_range(n)
        arr = [np.asarray(s, dtype=np.int64) for s in self.sets]
        if self.kind == "all":
            return [(np.arange(1, n + 1, dtype=np.int64), d, d)]
        if self.kind == "inside":
            return [(arr[0], d, d)]
        if self.kind == "crossing":
            return [(arr[0], 1, d), (arr[1], 1, d)]
        if self.kind == "meeting_all":
            used = np.concatenate(arr) if arr else np.zeros(0, dtype=np.int64)
            rest = np.setdiff1d(np.arange(1, n + 1, dtype=np.int64), used)
            return [(a, 1, d) for a in arr] + [(rest, 0, d)]
        if self.kind == "pattern":
            return [(a, k, k) for a, k in zip(arr, self.counts)]
        raise ParameterError(f"unknown family kind {self.kind!r}")

    def compositions(self, n: int, d: int) -> list[tuple[tuple[int, ...], int]]:
        """(per-block vertex counts, number of family members with those counts)."""
        blocks = self.blocks(n, d)
        out = []

        def rec(i, left, acc):
            if i == len(blocks):
                if left == 0:
                    w = 1
                    for (vs, _, _), k in zip(blocks, acc):
                        w *= comb(len(vs), k)
                    if w:
                        out.append((tuple(acc), w))
                return
            _, lo, hi = blocks[i]
            for k in range(lo, min(hi, left) + 1):
                rec(i + 1, left - k, acc + [k])

        rec(0, d, [])
        return out

    def size(self, n: int, d: int) -> int:
        return sum(w for _, w in self.compositions(n, d))

    def contains(self, edge: Iterable[int], n: int, d: int) -> bool:
        e = set(int(v) for v in edge)
        if len(e) != d or min(e) < 1 or max(e) > n:
            return False
        for (vs, lo, hi) in self.blocks(n, d):
            k = len(e.intersection(vs.tolist()))
            if not lo <= k <= hi:
                return False
        covered = set().union(*(set(vs.tolist()) for vs, _, _ in self.blocks(n, d)))
        return e <= covered

    def enumerate(self, n: int, d: int) -> np.ndarray:
        """All members as rows; only sensible for small families."""
        blocks = self.blocks(n, d)
        rows = []
        for counts, _ in self.compositions(n, d):
            pools = [itertools.combinations(vs.tolist(), k) for (vs, _, _), k in zip(blocks, counts)]
            for combo in itertools.product(*pools):
                rows.append(sorted(itertools.chain.from_iterable(combo)))
        out = np.array(rows, dtype=np.int64).reshape(-1, d)
        return out[_lex_order(out, n)] if out.size else out


def _floyd_rows(rng: np.random.Generator, s: int, k: int, rows: int) -> np.ndarray:
    """``rows`` independent uniform k-subsets of range(s) by Floyd's algorithm."""
    out = np.empty((rows, k), dtype=np.int64)
    for idx, j in enumerate(range(s - k, s)):
        t = rng.integers(0, j + 1, size=rows)
        if idx:
            dup = np.any(out[:, :idx] == t[:, None], axis=1)
            t = np.where(dup, j, t)
        out[:, idx] = t
    return out


def _draw_members(rng, blocks, comps, count: int, d: int) -> np.ndarray:
    """``count`` independent uniform members (repeats possible)."""
    weights = np.array([float(w) for _, w in comps])
    choice = rng.choice(len(comps), size=count, p=weights / weights.sum())
    out = np.empty((count, d), dtype=np.int64)
    for ci, (counts, _) in enumerate(comps):
        sel = np.flatnonzero(choice == ci)
        if sel.size == 0:
            continue
        col = 0
        for (vs, _, _), k in zip(blocks, counts):
            if k:
                picks = _floyd_rows(rng, len(vs), k, sel.size)
                out[sel, col:col + k] = vs[picks]
                col += k
    out.sort(axis=1)
    return out


def sample_members(family: EdgeFamily, m: int, seed=None, *, n: int, d: int) -> np.ndarray:
    """Exactly ``m`` distinct members of ``family``, uniform over all m-subsets."""
    rng = make_rng(seed)
    comps = family.compositions(n, d)
    size = sum(w for _, w in comps)
    if m < 0 or m > size:
        raise ParameterError(f"cannot draw {m} distinct edges from a family of {size}")
    if m == 0:
        return np.zeros((0, d), dtype=np.int64)
    if size <= ENUMERATE_LIMIT and 2 * m > size:
        rows = family.enumerate(n, d)
        return rows[np.sort(rng.choice(size, size=m, replace=False))]
    blocks = family.blocks(n, d)
    got = np.zeros((0, d), dtype=np.int64)
    while got.shape[0] < m:
        need = m - got.shape[0]
        batch = _draw_members(rng, blocks, comps, need + need // 8 + 8, d)
        allrows = np.concatenate([got, batch])
        allrows = allrows[_first_unique(allrows, n)]
        got = allrows[:m]
    return got[_lex_order(got, n)]


def sample_family(family: EdgeFamily, q: float, seed=None, *, d: int, n: int | None = None) -> np.ndarray:
    """Include each member of ``family`` independently with probability ``q``.

    Drawn as a Binomial(|family|, q) count followed by that many distinct
    uniform members.  ``n`` defaults to the largest vertex mentioned, which is
    only valid for ``inside``, ``crossing`` and ``pattern`` families.
    """
    check_probability(q, "q")
    if n is None:
        if family.kind in ("all", "meeting_all"):
            raise ParameterError(f"family kind {family.kind!r} needs n")
        n = max((s[-1] for s in family.sets if s), default=d)
        n = max(n, d)
    rng = make_rng(seed)
    size = family.size(n, d)
    m = sample_binomial(rng, size, q)
    return sample_members(family, m, rng, n=n, d=d)


def sample_hnp(n: int, d: int, p: float, seed=None) -> Hypergraph:
    """H_d(n, p): every d-subset of 1..n present independently with probability p."""
    check_edge_size(n, d)
    check_probability(p, "p")
    rows = sample_family(EdgeFamily.all(), p, seed, d=d, n=n)
    return Hypergraph._trusted(n, d, rows)


def sample_hnm(n: int, d: int, m: int, seed=None) -> Hypergraph:
    """H_d(n, m): uniform among d-uniform hypergraphs with exactly m edges."""
    check_edge_size(n, d)
    total = comb(n, d)
    if not 0 <= m <= total:
        raise ParameterError(f"m must lie in [0, C({n},{d})={total}]")
    rows = sample_members(EdgeFamily.all(), m, seed, n=n, d=d)
    return Hypergraph._trusted(n, d, rows)
