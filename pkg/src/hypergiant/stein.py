"""Component indicators I_alpha and their pathwise identities at small n.

Vertex sets are bitmasks over vertices 1..n (bit v-1).  For a set A
disjoint from alpha, I_alpha^A = 1 iff alpha is a component of the
hypergraph obtained by deleting every edge that meets A; Y = |alpha| I.

The audited identities, all exact:

    removal   Y_a (Y_b - Y_b^a) Y_b^a = 0             a, b disjoint
    overlap   Y_a Y_b = 0                             a, b meet, a != b
    chain     (Y_b - Y_b^a) Y_g^a = (Y_b - Y_b^a) Y_g = 0
              a disjoint from b and g, b and g meet, b != g
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numba
import numpy as np

from ._combinatorics import comb
from ._errors import ParameterError
from ._validation import check_edge_size, check_int, check_probability
from .hypergraph import Hypergraph, sample_hnp
from .rng import mix64
from .stats import TestReport

MAX_N = 14
MAX_K = 4
FACTOR_SIZE = 3


def subset_masks(n: int, k_max: int) -> np.ndarray:
    """All nonempty subsets of 1..n of size <= k_max, by size then lexicographically."""
    out = []
    for k in range(1, k_max + 1):
        for s in combinations(range(n), k):
            out.append(sum(1 << v for v in s))
    return np.array(out, dtype=np.int64)


def edge_masks(h: Hypergraph) -> np.ndarray:
    if h.m == 0:
        return np.zeros(0, dtype=np.int64)
    return np.bitwise_or.reduce(np.left_shift(1, h.edges - 1), axis=1).astype(np.int64)


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _connected(alpha, edges, avoid):
    """Is alpha connected using edges inside alpha that miss ``avoid``?"""
    low = alpha & -alpha
    reach = low
    changed = True
    while changed:
        changed = False
        for e in edges:
            if (e & ~alpha) == 0 and (e & avoid) == 0 and (e & reach) and (e & ~reach):
                reach |= e
                changed = True
    return reach == alpha


@numba.njit(cache=True)
def _indicator(alpha, edges, avoid):
    """I_alpha^A with A given by the mask ``avoid`` (assumed disjoint from alpha)."""
    for e in edges:
        if (e & alpha) and (e & ~alpha) and (e & avoid) == 0:
            return 0
    return 1 if _connected(alpha, edges, avoid) else 0


@numba.njit(cache=True)
def _indicator_table(masks, edges):
    """I[a] = I_alpha and IA[a, b] = I_beta^alpha (-1 where alpha meets beta)."""
    m = masks.shape[0]
    base = np.empty(m, dtype=np.int64)
    removed = np.full((m, m), -1, dtype=np.int64)
    for b in range(m):
        base[b] = _indicator(masks[b], edges, 0)
    for a in range(m):
        for b in range(m):
            if (masks[a] & masks[b]) == 0:
                removed[a, b] = _indicator(masks[b], edges, masks[a])
    return base, removed


@numba.njit(cache=True)
def _audit(masks, sizes, base, removed):
    """Violations of the three identities and the number of tuples examined."""
    m = masks.shape[0]
    viol = np.zeros(3, dtype=np.int64)
    tuples = np.zeros(3, dtype=np.int64)
    for a in range(m):
        ya = sizes[a] * base[a]
        for b in range(m):
            if a == b:
                continue
            yb = sizes[b] * base[b]
            if (masks[a] & masks[b]) == 0:
                yba = sizes[b] * removed[a, b]
                tuples[0] += 1
                if ya * (yb - yba) * yba != 0:
                    viol[0] += 1
                diff = yb - yba
                for g in range(m):
                    if g == a or g == b:
                        continue
                    if (masks[a] & masks[g]) == 0 and (masks[b] & masks[g]) != 0:
                        tuples[2] += 1
                        if diff != 0:
                            yga = sizes[g] * removed[a, g]
                            yg = sizes[g] * base[g]
                            if diff * yga != 0 or diff * yg != 0:
                                viol[2] += 1
            else:
                tuples[1] += 1
                if ya * yb != 0:
                    viol[1] += 1
    return viol, tuples


@numba.njit(cache=True)
def _count_components(masks, edge_sets, offsets, counts):
    for t in range(offsets.shape[0] - 1):
        edges = edge_sets[offsets[t]:offsets[t + 1]]
        for a in range(masks.shape[0]):
            counts[a] += _indicator(masks[a], edges, 0)


@dataclass(frozen=True, eq=False)
class IndicatorFamily:
    """I_alpha and Y_alpha for every alpha with |alpha| <= k_max in one hypergraph."""

    n: int
    k_max: int
    masks: np.ndarray
    sizes: np.ndarray
    edges: np.ndarray
    I: np.ndarray
    removed: np.ndarray

    @classmethod
    def build(cls, h: Hypergraph, k_max: int) -> "IndicatorFamily":
        _check_small(h.n, k_max)
        masks = subset_masks(h.n, k_max)
        sizes = np.array([bin(int(x)).count("1") for x in masks], dtype=np.int64)
        edges = edge_masks(h)
        base, removed = _indicator_table(masks, edges)
        return cls(h.n, k_max, masks, sizes, edges, base, removed)

    @property
    def Y(self) -> np.ndarray:
        return self.sizes * self.I

    def index(self, alpha) -> int:
        mask = to_mask(alpha)
        hit = np.flatnonzero(self.masks == mask)
        if hit.size == 0:
            raise ParameterError(f"{sorted(alpha)} is not in the family")
        return int(hit[0])

    def indicator(self, alpha, removed=()) -> int:
        """I_alpha^A for arbitrary A disjoint from alpha."""
        a, r = to_mask(alpha), to_mask(removed)
        if a & r:
            raise ParameterError("removed set must be disjoint from alpha")
        return int(_indicator(np.int64(a), self.edges, np.int64(r)))


def to_mask(vs) -> int:
    out = 0
    for v in vs:
        out |= 1 << (int(v) - 1)
    return out


def from_mask(mask: int) -> tuple[int, ...]:
    return tuple(v + 1 for v in range(int(mask).bit_length()) if mask >> v & 1)


def _check_small(n: int, k_max: int) -> None:
    if n > MAX_N:
        raise ParameterError(f"exhaustive enumeration needs n <= {MAX_N}, got {n}")
    if not 1 <= k_max <= MAX_K:
        raise ParameterError(f"k_max must lie in [1, {MAX_K}], got {k_max}")


def audit_identities(h: Hypergraph, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Violation and tuple counts for the removal, overlap and chain identities."""
    fam = IndicatorFamily.build(h, k_max)
    return _audit(fam.masks, fam.sizes, fam.I, fam.removed)


def comp_probability(k: int, d: int, p: float) -> float:
    """Exact probability that k given vertices span a connected sub-hypergraph.

    Sums over all edge subsets inside the set; fine for k <= 4.
    """
    if k == 1:
        return 1.0
    inside = [sum(1 << v for v in e) for e in combinations(range(k), d)]
    full = (1 << k) - 1
    total = 0.0
    for r in range(len(inside) + 1):
        for sub in combinations(inside, r):
            arr = np.array(sub, dtype=np.int64)
            if _connected(np.int64(full), arr, np.int64(0)):
                total += p ** r * (1.0 - p) ** (len(inside) - r)
    return total


def component_probability(n: int, d: int, p: float, k: int) -> float:
    """P[comp(alpha)] (1-p)^|E(alpha, V minus alpha)| for |alpha| = k."""
    crossing = comb(n, d) - comb(n - k, d) - comb(k, d)
    return comp_probability(k, d, p) * (1.0 - p) ** crossing


def factorization_check(n: int, d: int, p: float, draws: int, seed: int = 0,
                        max_size: int = FACTOR_SIZE, stream_offset: int = 0):
    """Monte Carlo frequency of I_alpha = 1 against the product formula, per alpha.

    Returns (masks, empirical frequency, predicted probability, z-score).
    """
    masks = subset_masks(n, max_size)
    counts = np.zeros(masks.size, dtype=np.int64)
    chunk = 4096
    for start in range(0, draws, chunk):
        stop = min(draws, start + chunk)
        parts = [edge_masks(sample_hnp(n, d, p, mix64(seed, stream_offset + i)))
                 for i in range(start, stop)]
        offsets = np.zeros(len(parts) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([x.size for x in parts])
        flat = np.concatenate(parts) if offsets[-1] else np.zeros(0, dtype=np.int64)
        _count_components(masks, flat, offsets, counts)
    sizes = np.array([bin(int(x)).count("1") for x in masks])
    pred = np.array([component_probability(n, d, p, int(k)) for k in sizes])
    freq = counts / draws
    se = np.sqrt(pred * (1.0 - pred) / draws)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, np.abs(freq - pred) / np.where(se > 0, se, 1.0),
                     np.where(freq == pred, 0.0, np.inf))
    return masks, freq, pred, z


def stein_audit(n: int, d: int, p: float, k_max: int = 3, trials: int = 100, seed: int = 0,
                mc_draws: int = 100_000, z_max: float = 4.0) -> TestReport:
    """Exhaustive pathwise identity audit plus the Monte Carlo factorization check.

    The statistic counts identity violations plus sets alpha whose
    empirical component frequency is more than ``z_max`` standard errors
    from the product formula; it must be zero.
    """
    check_edge_size(n, d)
    check_probability(p, "p")
    k_max = check_int(k_max, "k_max", 1)
    trials = check_int(trials, "trials", 1)
    _check_small(n, k_max)
    viol = np.zeros(3, dtype=np.int64)
    tuples = np.zeros(3, dtype=np.int64)
    for t in range(trials):
        v, c = audit_identities(sample_hnp(n, d, p, mix64(seed, t)), k_max)
        viol += v
        tuples += c
    details = {
        "violations": {"removal": int(viol[0]), "overlap": int(viol[1]), "chain": int(viol[2])},
        "tuples": {"removal": int(tuples[0]), "overlap": int(tuples[1]), "chain": int(tuples[2])},
    }
    bad = 0
    if mc_draws:
        masks, freq, pred, z = factorization_check(n, d, p, mc_draws, seed,
                                                   min(FACTOR_SIZE, k_max), trials)
        bad = int(np.sum(z > z_max))
        details["factorization"] = {
            "draws": int(mc_draws),
            "sets": int(masks.size),
            "max_z": float(np.max(z)) if np.all(np.isfinite(z)) else math.inf,
            "outside_tolerance": bad,
            "z_max": z_max,
        }
    return TestReport(
        test="stein_audit",
        statistic=float(viol.sum() + bad),
        threshold=0.0,
        relation="<=",
        params={"n": n, "d": d, "p": p, "k_max": k_max},
        seed=seed,
        trials=trials,
        details=details,
    )
