"""Multi-round edge exposure.

``run_four_rounds`` reveals H_d(n, p) in rounds R1-R4: round 1 is
H_d(n, p1); with G the largest component of round 1, round 2 adds edges
inside V\\G, round 3 edges crossing between G and V\\G, round 4 edges
inside G, each new edge with probability p2.  Since
p1 + (1 - p1) p2 = p the union is H_d(n, p).

``run_artificial`` is the surrogate with a fixed set G = {1..n1}: rounds
R1' and R2' expose edges inside V\\G at p1 and p2, round R3' exposes
crossing edges at p2.  S_G is the set of outside vertices that reach G.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ._combinatorics import comb
from ._errors import DomainError, HypergiantError, ParameterError, StatisticsError
from ._validation import check_edge_size, check_int, check_probability
from .components import components, label_components, largest_order
from .hypergraph import EdgeFamily, Hypergraph, sample_family, sample_hnp
from .rng import make_rng
from .theory import GammaInputs, critical_c, gamma_variance

MIN_REACH_TRACES = 100


@dataclass(frozen=True)
class ExposureConfig:
    p: float
    eps: float
    p1: float
    p2: float

    def round1_c(self, n: int, d: int) -> float:
        return comb(n - 1, d - 1) * self.p1


def split_probabilities(p: float, eps: float) -> ExposureConfig:
    """p1 = (1 - eps) p and the p2 solving p1 + p2 - p1 p2 = p."""
    p = check_probability(p, "p")
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ParameterError(f"eps must lie in [0, 1), got {eps}")
    p1 = (1.0 - eps) * p
    if p1 >= 1.0:
        raise DomainError("p1 = 1: the second round has no free edges")
    p2 = (p - p1) / (1.0 - p1)
    return ExposureConfig(p, eps, p1, p2)


def _complement(n: int, g: np.ndarray) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    mask[g] = False
    return np.flatnonzero(mask)


def _add_new(h: Hypergraph, rows: np.ndarray) -> tuple[Hypergraph, np.ndarray]:
    """Add the rows not already present; return the new graph and the added rows."""
    if rows.shape[0]:
        rows = rows[~h.contains_rows(rows)]
    return Hypergraph._trusted(h.n, h.d, np.concatenate([h.edges, rows])), rows


# -------------------------------------------------------------- R1 - R4

@dataclass(frozen=True, eq=False)
class FourRoundTrace:
    n: int
    d: int
    config: ExposureConfig
    H1: Hypergraph
    H2: Hypergraph
    H3: Hypergraph
    H4: Hypergraph
    G: np.ndarray
    orders: tuple[int, int, int, int]
    G_in_largest: bool

    @property
    def S(self) -> int:
        return self.orders[2] - self.orders[0]

    @property
    def L1(self) -> int:
        return self.orders[0]

    @property
    def L3(self) -> int:
        return self.orders[2]

    def nested(self) -> bool:
        """E(H1) <= E(H2) <= E(H3) <= E(H4)."""
        hs = (self.H1, self.H2, self.H3, self.H4)
        return all(bool(np.all(b.contains_rows(a.edges))) for a, b in zip(hs, hs[1:]))


def _check_round1(n: int, d: int, cfg: ExposureConfig) -> None:
    c1 = cfg.round1_c(n, d)
    if cfg.p2 > 0 and not c1 > critical_c(d):
        raise DomainError(f"round-1 parameter c1={c1:.6g} is not supercritical for d={d}")


def run_four_rounds(n: int, d: int, p: float, eps: float, seed=None) -> FourRoundTrace:
    check_edge_size(n, d)
    cfg = split_probabilities(p, eps)
    _check_round1(n, d, cfg)
    rng = make_rng(seed)
    h1 = sample_hnp(n, d, cfg.p1, rng)
    summary = components(h1)
    g = np.asarray(summary.largest_vertices, dtype=np.int64)
    rest = _complement(n, g)
    h2, _ = _add_new(h1, sample_family(EdgeFamily.inside(rest), cfg.p2, rng, d=d, n=n))
    cross = (sample_family(EdgeFamily.crossing(g, rest), cfg.p2, rng, d=d, n=n)
             if rest.size else np.zeros((0, d), dtype=np.int64))
    h3, _ = _add_new(h2, cross)
    h4, _ = _add_new(h3, sample_family(EdgeFamily.inside(g), cfg.p2, rng, d=d, n=n))
    s3 = components(h3)
    lab = s3.labels[g - 1]
    g_in = bool(np.all(lab == lab[0])) and int(np.sum(s3.labels == lab[0])) == s3.largest_order
    orders = (summary.largest_order, largest_order(h2), s3.largest_order, largest_order(h4))
    if orders[2] != orders[3]:
        raise HypergiantError(f"round 4 changed the largest order: {orders}")
    return FourRoundTrace(n, d, cfg, h1, h2, h3, h4, g, orders, g_in)


# ----------------------------------------------------------- R1' - R3'

@dataclass(frozen=True, eq=False)
class ArtificialTrace:
    """State of rounds R1'-R3' for G = {1, ..., n1}.

    ``outside_orders[i]`` is the order of vertex n1+1+i's component in H2G and
    ``attached[i]`` whether that vertex reaches G in H3G.
    """

    n: int
    d: int
    n1: int
    p1: float
    p2: float
    H1G: Hypergraph
    H2G: Hypergraph
    H3G: Hypergraph
    F: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    F3: np.ndarray
    W: np.ndarray
    SG_set: np.ndarray
    S_iso: int
    outside_orders: np.ndarray = field(repr=False)
    attached: np.ndarray = field(repr=False)

    @property
    def SG(self) -> int:
        return int(self.SG_set.size)

    @property
    def S_big(self) -> int:
        return self.SG - self.S_iso

    @property
    def G(self) -> np.ndarray:
        return np.arange(1, self.n1 + 1, dtype=np.int64)

    @property
    def p(self) -> float:
        return self.p1 + self.p2 - self.p1 * self.p2

    @property
    def eps(self) -> float:
        return 1.0 - self.p1 / self.p if self.p > 0 else 0.0

    @property
    def c(self) -> float:
        return comb(self.n - 1, self.d - 1) * self.p


def _outside_orders(h2g: Hypergraph, n1: int) -> np.ndarray:
    """Component order in H2G of every vertex, index 0 is vertex 1."""
    labels, sizes = label_components(h2g.n, h2g.edges)
    out = sizes[labels]
    out[:n1] = 0
    return out


def _classify(n: int, n1: int, orders: np.ndarray, rows: np.ndarray):
    """Split round-3 rows into F1, F2, F3 given H2G component orders per vertex."""
    d = rows.shape[1]
    outside = rows > n1
    n_out = outside.sum(axis=1)
    big = np.zeros(rows.shape[0], dtype=bool)
    if rows.shape[0]:
        big = np.any(outside & (orders[rows - 1] >= 2), axis=1)
    in_f1 = (n_out >= 2) | big
    covered = np.zeros(n + 1, dtype=bool)
    f1 = rows[in_f1]
    covered[f1[f1 > n1]] = True
    rest = ~in_f1
    # a row outside F1 has exactly one outside vertex: the largest one
    out_vertex = rows[:, d - 1]
    in_f2 = rest & covered[out_vertex]
    in_f3 = rest & ~covered[out_vertex]
    return f1, rows[in_f2], rows[in_f3]


def classify_round3(trace: ArtificialTrace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(F1, F2, F3) recomputed from H2G and the round-3 edge set."""
    orders = _outside_orders(trace.H2G, trace.n1)
    return _classify(trace.n, trace.n1, orders, np.asarray(trace.F))


def _isolated_outside(n: int, n1: int, orders: np.ndarray, f1: np.ndarray) -> np.ndarray:
    """Outside vertices isolated in H2G + F1 + F2 (F2 only touches F1-covered vertices)."""
    iso = np.zeros(n + 1, dtype=bool)
    iso[n1 + 1:] = orders[n1:] == 1
    iso[f1.ravel()] = False
    return np.flatnonzero(iso)


def _reach_mask(n: int, n1: int, rows: np.ndarray) -> np.ndarray:
    """Boolean mask over vertices 1..n: outside vertices sharing a component with G."""
    labels, _ = label_components(n, rows)
    hit = np.zeros(labels.max() + 1 if n else 0, dtype=bool)
    hit[labels[:n1]] = True
    mask = hit[labels]
    mask[:n1] = False
    return mask


def run_artificial(n: int, d: int, n1: int, p1: float, p2: float, seed=None) -> ArtificialTrace:
    check_edge_size(n, d)
    n1 = check_int(n1, "n1", 0)
    if n1 >= n:
        raise ParameterError(f"n1 must be < n, got n1={n1}, n={n}")
    p1 = check_probability(p1, "p1")
    p2 = check_probability(p2, "p2")
    rng = make_rng(seed)
    g = np.arange(1, n1 + 1, dtype=np.int64)
    rest = np.arange(n1 + 1, n + 1, dtype=np.int64)
    inside = EdgeFamily.inside(rest)
    h1g = Hypergraph._trusted(n, d, sample_family(inside, p1, rng, d=d, n=n)
                              if rest.size >= d else np.zeros((0, d), dtype=np.int64))
    r2 = (sample_family(inside, p2, rng, d=d, n=n) if rest.size >= d
          else np.zeros((0, d), dtype=np.int64))
    h2g, _ = _add_new(h1g, r2)
    f = (sample_family(EdgeFamily.crossing(g, rest), p2, rng, d=d, n=n)
         if n1 > 0 else np.zeros((0, d), dtype=np.int64))
    h3g = Hypergraph._trusted(n, d, np.concatenate([h2g.edges, f]))
    orders = _outside_orders(h2g, n1)
    f1, f2, f3 = _classify(n, n1, orders, f)
    w = _isolated_outside(n, n1, orders, f1)
    mask = _reach_mask(n, n1, h3g.edges)
    sg = np.flatnonzero(mask) + 1
    s_iso = int(np.unique(f3[:, d - 1]).size) if f3.shape[0] else 0
    return ArtificialTrace(n, d, n1, p1, p2, h1g, h2g, h3g, f, f1, f2, f3, w, sg, s_iso,
                           orders[n1:].copy(), mask[n1:].copy())


def isolated_attach_probability(n1: int, d: int, p2: float) -> float:
    """q = 1 - (1 - p2)^C(n1, d-1)."""
    if p2 >= 1.0:
        return 1.0 if comb(n1, d - 1) > 0 else 0.0
    return -math.expm1(comb(n1, d - 1) * math.log1p(-p2))


def isolated_attach(trace: ArtificialTrace) -> tuple[np.ndarray, tuple[int, float]]:
    """W and the parameters (|W|, q) of the conditional binomial law of S_iso."""
    f1, _, f3 = classify_round3(trace)
    orders = _outside_orders(trace.H2G, trace.n1)
    w = _isolated_outside(trace.n, trace.n1, orders, f1)
    if not np.array_equal(w, trace.W):
        raise HypergiantError("W disagrees with the recomputed classification")
    hit = np.unique(f3[:, trace.d - 1]) if f3.shape[0] else np.zeros(0, dtype=np.int64)
    if hit.size != trace.S_iso or not np.all(np.isin(hit, w)):
        raise HypergiantError("S_iso disagrees with the F3 edges")
    return w, (int(w.size), isolated_attach_probability(trace.n1, trace.d, trace.p2))


def resample_isolated(trace: ArtificialTrace, trials: int, seed=None) -> np.ndarray:
    """S_iso under fresh draws of the edges joining d-1 vertices of G to one of W.

    H2G, F1 and F2 stay frozen.  Each draw adds the new edges and counts the
    W vertices that now reach G.
    """
    trials = check_int(trials, "trials", 1)
    rng = make_rng(seed)
    n, n1, d = trace.n, trace.n1, trace.d
    base = np.concatenate([trace.H2G.edges, trace.F1, trace.F2])
    out = np.zeros(trials, dtype=np.int64)
    if trace.W.size == 0 or n1 < d - 1:
        return out
    fam = EdgeFamily.pattern([(trace.G, d - 1), (trace.W, 1)])
    w_idx = trace.W - 1
    for t in range(trials):
        new = sample_family(fam, trace.p2, rng, d=d, n=n)
        out[t] = int(_reach_mask(n, n1, np.concatenate([base, new]))[w_idx].sum())
    return out


def w_lower_bound(n: int, n1: int, c: float) -> float:
    """(n - n1) exp(-c) / 2, the high-probability floor on |W|."""
    return 0.5 * (n - n1) * math.exp(-c)


# ------------------------------------------------------- reach statistics

@dataclass(frozen=True)
class ReachStats:
    inputs: GammaInputs
    r_i: np.ndarray
    rbar_i: np.ndarray
    L: int
    traces: int
    anomalies: int
    sg_mean: float
    sg_var: float

    @property
    def gamma(self) -> float:
        return gamma_variance(self.inputs)[0]

    @property
    def predicted_variance(self) -> float:
        return gamma_variance(self.inputs)[1]


def reach_cutoff(n: int) -> int:
    return int(math.floor(math.log(n) ** 2))


def estimate_reach_stats(traces: Iterable[ArtificialTrace], L: int | None = None) -> ReachStats:
    """Empirical r_i, rbar_i and the derived (r, R, Rbar) from artificial traces.

    r_i is the fraction of outside vertices lying in an H2G component of
    order i and reaching G; rbar_i the same for vertices that do not reach
    G.  Orders above L are not summed and are counted as anomalies.
    """
    key = None
    acc_in = acc_out = None
    anomalies = 0
    sg = []
    for tr in traces:
        k = (tr.n, tr.d, tr.n1, tr.p1, tr.p2)
        if key is None:
            key = k
            L = reach_cutoff(tr.n) if L is None else check_int(L, "L", 1)
            acc_in = np.zeros(L + 1, dtype=np.int64)
            acc_out = np.zeros(L + 1, dtype=np.int64)
        elif k != key:
            raise ParameterError("all traces must share (n, d, n1, p1, p2)")
        orders, att = tr.outside_orders, tr.attached
        anomalies += int(np.sum(orders > L))
        acc_in += np.bincount(np.minimum(orders[att], L + 1), minlength=L + 2)[:L + 1]
        acc_out += np.bincount(np.minimum(orders[~att], L + 1), minlength=L + 2)[:L + 1]
        sg.append(tr.SG)
    t = len(sg)
    if t < MIN_REACH_TRACES:
        raise StatisticsError(f"estimate_reach_stats needs at least {MIN_REACH_TRACES} traces, got {t}")
    n, d, n1, p1, p2 = key
    outside = n - n1
    r_i = acc_in / (t * outside)
    rbar_i = acc_out / (t * outside)
    i = np.arange(L + 1)
    r, R, Rbar = float(r_i.sum()), float((i * r_i).sum()), float((i * rbar_i).sum())
    p = p1 + p2 - p1 * p2
    eps = 1.0 - p1 / p if p > 0 else 0.0
    inputs = GammaInputs(r=r, R=R, Rbar=Rbar, alpha=1.0 - n1 / n,
                         c=comb(n - 1, d - 1) * p, eps=eps, d=d, n=n)
    arr = np.asarray(sg, dtype=np.float64)
    return ReachStats(inputs, r_i, rbar_i, L, t, anomalies, float(arr.mean()), float(arr.var(ddof=1)))


# ------------------------------------------------------------- records

def trace_record(trial: int, four: FourRoundTrace, art: ArtificialTrace) -> dict:
    """Flat summary of one trial, matching the JSON trace schema."""
    cfg = four.config
    return {
        "trial": int(trial),
        "n": int(four.n),
        "d": int(four.d),
        "c": comb(four.n - 1, four.d - 1) * cfg.p,
        "eps": cfg.eps,
        "L1": int(four.L1),
        "L3": int(four.L3),
        "S": int(four.S),
        "SG": int(art.SG),
        "W": int(art.W.size),
        "S_iso": int(art.S_iso),
        "F1": int(art.F1.shape[0]),
        "F2": int(art.F2.shape[0]),
        "F3": int(art.F3.shape[0]),
    }


def run_exposure_trial(n: int, d: int, p: float, eps: float, seed=None, n1: int | None = None):
    """Four-round trace plus the artificial process, same generator.

    The artificial process uses ``n1`` when given and L(H1) otherwise.
    """
    rng = make_rng(seed)
    four = run_four_rounds(n, d, p, eps, rng)
    n1 = min(four.L1, n - 1) if n1 is None else n1
    art = run_artificial(n, d, n1, four.config.p1, four.config.p2, rng)
    return four, art
