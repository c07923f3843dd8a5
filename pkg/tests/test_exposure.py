import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import binom

from hypergiant import (DomainError, Hypergraph, ParameterError, StatisticsError, chi_square,
                        classify_round3, components_oracle, estimate_reach_stats, isolated_attach,
                        mix64, run_artificial, run_four_rounds, split_probabilities)
from hypergiant._combinatorics import comb
from hypergiant.exposure import (isolated_attach_probability, reach_cutoff, resample_isolated,
                                 run_exposure_trial, trace_record, w_lower_bound)
from hypergiant.theory import ModelParams, attach_coefficients


# ------------------------------------------------------------- split

def test_split_examples():
    cfg = split_probabilities(0.5, 0.2)
    assert cfg.p1 == pytest.approx(0.4) and cfg.p2 == pytest.approx(1 / 6)
    assert (1 - cfg.p1) * (1 - cfg.p2) == pytest.approx(0.5, rel=1e-12)
    cfg = split_probabilities(0.0, 0.3)
    assert (cfg.p1, cfg.p2) == (0.0, 0.0)
    cfg = split_probabilities(1e-4, 0.1)
    assert cfg.p1 == pytest.approx(9e-5, rel=1e-12)
    assert cfg.p2 == pytest.approx(1e-5 / (1 - 9e-5), rel=1e-12)
    assert cfg.p2 == pytest.approx(1.00009e-5, rel=1e-6)


def test_split_errors():
    with pytest.raises(DomainError):
        split_probabilities(1.0, 0.0)
    for eps in (-0.1, 1.0):
        with pytest.raises(ParameterError):
            split_probabilities(0.1, eps)


@given(p=st.floats(0, 0.999), eps=st.floats(0, 0.999))
@settings(max_examples=300, deadline=None)
def test_split_composition_property(p, eps):
    cfg = split_probabilities(p, eps)
    assert (1 - cfg.p1) * (1 - cfg.p2) == pytest.approx(1 - p, rel=1e-12, abs=1e-15)
    assert 0 <= cfg.p2 <= 1


# ------------------------------------------------------- four rounds

def test_four_rounds_degenerate_split():
    tr = run_four_rounds(500, 2, 2.0 / 499, 0.0, seed=3)
    assert tr.H1 == tr.H2 == tr.H3 == tr.H4
    assert tr.S == 0


def test_four_rounds_subcritical_round1_is_domain_error():
    with pytest.raises(DomainError):
        run_four_rounds(1000, 2, 1.05 / 999, 0.1, seed=0)


@pytest.mark.parametrize("d,c", [(2, 2.0), (3, 1.5), (4, 0.8)])
def test_four_rounds_invariants(d, c):
    n = 800
    p = c / comb(n - 1, d - 1)
    for i in range(10):
        tr = run_four_rounds(n, d, p, 0.1, seed=mix64(20, i))
        assert tr.nested()
        o = tr.orders
        assert o[0] <= o[1] <= o[2] == o[3]
        assert tr.L1 == len(tr.G)
        if tr.G_in_largest:
            assert tr.S >= 0


def test_four_rounds_edge_count():
    n, d, trials = 2000, 2, 500
    p = 2.0 / (n - 1)
    m = np.array([run_four_rounds(n, d, p, 0.1, seed=mix64(21, i)).H4.m for i in range(trials)])
    total = comb(n, d)
    se = math.sqrt(total * p * (1 - p) / trials)
    assert abs(m.mean() - total * p) <= 3 * se


def test_four_round_rounds_use_the_right_families():
    tr = run_four_rounds(600, 3, 1.5 / comb(599, 2), 0.2, seed=5)
    g = set(tr.G.tolist())
    new2 = tr.H2.edge_set() - tr.H1.edge_set()
    new3 = tr.H3.edge_set() - tr.H2.edge_set()
    new4 = tr.H4.edge_set() - tr.H3.edge_set()
    assert all(not g & set(e) for e in new2)
    assert all(g & set(e) and set(e) - g for e in new3)
    assert all(set(e) <= g for e in new4)


# ------------------------------------------------------------ artificial

def test_artificial_p2_zero():
    tr = run_artificial(300, 2, 100, 1.5 / 299, 0.0, seed=1)
    assert tr.SG == 0 and tr.S_iso == 0
    assert tr.F.shape[0] == tr.F1.shape[0] == tr.F2.shape[0] == tr.F3.shape[0] == 0
    s = components_oracle(tr.H2G)
    iso = [v for v in range(101, 301) if len(s.component_of(v)) == 1]
    assert tr.W.tolist() == iso
    w, (size, q) = isolated_attach(tr)
    assert size == len(iso) and q == 0.0


def test_artificial_single_outside_vertex_attaches():
    tr = run_artificial(10, 2, 9, 0.0, 1.0, seed=0)
    assert tr.SG == 1
    assert tr.SG_set.tolist() == [10]


def test_artificial_rejects_large_n1():
    with pytest.raises(ParameterError):
        run_artificial(10, 2, 10, 0.1, 0.1, seed=0)


def brute_classify(tr):
    """Direct reading of the F1/F2/F3 and W definitions."""
    g = set(range(1, tr.n1 + 1))
    s2 = components_oracle(tr.H2G)
    f1, f2, f3 = [], [], []
    rows = [tuple(r) for r in tr.F.tolist()]
    for e in rows:
        out = [v for v in e if v not in g]
        if len(out) >= 2 or any(len(s2.component_of(v)) >= 2 for v in out):
            f1.append(e)
    covered = {v for e in f1 for v in e if v not in g}
    for e in rows:
        if e in f1:
            continue
        (v,) = [u for u in e if u not in g]
        (f2 if v in covered else f3).append(e)
    h = Hypergraph(d=tr.d, n=tr.n, edges=np.array(f1 + f2 + [tuple(r) for r in tr.H2G.edges.tolist()],
                                                   dtype=np.int64).reshape(-1, tr.d))
    s = components_oracle(h)
    w = [v for v in range(tr.n1 + 1, tr.n + 1) if len(s.component_of(v)) == 1]
    return set(f1), set(f2), set(f3), w


def test_classification_matches_brute_force():
    checked = 0
    for i in range(300):
        rng = np.random.default_rng(mix64(22, i))
        d = int(rng.integers(2, 4))
        n = int(rng.integers(d + 2, 21))
        n1 = int(rng.integers(1, n))
        base = 1.0 / max(1, comb(n - 1, d - 1))
        tr = run_artificial(n, d, n1, min(1.0, float(rng.uniform(0, 2)) * base),
                            min(1.0, float(rng.uniform(0, 4)) * base), seed=rng)
        f1, f2, f3, w = brute_classify(tr)
        a1, a2, a3 = classify_round3(tr)
        assert {tuple(r) for r in a1.tolist()} == f1
        assert {tuple(r) for r in a2.tolist()} == f2
        assert {tuple(r) for r in a3.tolist()} == f3
        assert tr.W.tolist() == w
        checked += tr.F.shape[0] > 0
    assert checked > 100


def test_classification_examples():
    # d = 2, isolated outside vertices, each crossing edge hitting its own outside vertex
    tr = run_artificial(40, 2, 20, 0.0, 0.0, seed=0)
    f = np.array([[1, 21], [2, 22], [3, 23]])
    object.__setattr__(tr, "F", f)
    f1, f2, f3 = classify_round3(tr)
    assert f1.shape[0] == f2.shape[0] == 0 and f3.tolist() == f.tolist()
    # a 3-edge with two vertices outside G lands in F1
    tr = run_artificial(10, 3, 5, 0.0, 0.0, seed=0)
    object.__setattr__(tr, "F", np.array([[1, 6, 7]]))
    f1, _, _ = classify_round3(tr)
    assert f1.tolist() == [[1, 6, 7]]


@pytest.mark.parametrize("d,c", [(2, 2.0), (3, 1.5)])
def test_artificial_invariants(d, c):
    n = 2000
    p = c / comb(n - 1, d - 1)
    cfg = split_probabilities(p, 0.1)
    for i in range(20):
        tr = run_artificial(n, d, 1400, cfg.p1, cfg.p2, seed=mix64(23, i))
        parts = [tr.F1, tr.F2, tr.F3]
        keys = [{tuple(r) for r in x.tolist()} for x in parts]
        assert sum(len(k) for k in keys) == tr.F.shape[0]
        assert set().union(*keys) == {tuple(r) for r in tr.F.tolist()}
        w = set(tr.W.tolist())
        for e in tr.F3.tolist():
            assert sum(v <= tr.n1 for v in e) == d - 1
            assert e[-1] in w
        assert tr.SG == tr.S_iso + tr.S_big
        assert 0 <= tr.S_iso <= len(w)
        assert np.all(tr.SG_set > tr.n1)


def test_isolated_attach_probability_examples():
    assert isolated_attach_probability(50, 2, 0.0) == 0.0
    assert isolated_attach_probability(2, 3, 0.01) == pytest.approx(0.01, rel=1e-14)
    assert isolated_attach_probability(1, 2, 0.3) == pytest.approx(0.3, rel=1e-14)
    assert isolated_attach_probability(100, 3, 1e-3) == pytest.approx(1 - (1 - 1e-3) ** comb(100, 2))


def test_isolated_attach_resample_small():
    n, d = 3000, 2
    p = 2.0 / (n - 1)
    cfg = split_probabilities(p, 0.1)
    tr = run_artificial(n, d, 2300, cfg.p1, cfg.p2, seed=24)
    w, (size, q) = isolated_attach(tr)
    s = resample_isolated(tr, 2000, seed=25)
    assert s.max() <= size
    support = np.arange(size + 1)
    _, _, pval = chi_square(np.bincount(s, minlength=size + 1), binom.pmf(support, size, q) * s.size)
    assert pval > 0.01


def test_w_lower_bound_holds():
    n, c = 5000, 2.0
    cfg = split_probabilities(c / (n - 1), 0.1)
    n1 = int(round(attach_coefficients(ModelParams.from_c(n, 2, c), 0.1).mu1))
    ok = [run_artificial(n, 2, n1, cfg.p1, cfg.p2, seed=mix64(26, i)).W.size >= w_lower_bound(n, n1, c)
          for i in range(50)]
    assert all(ok)


# ---------------------------------------------------------- reach stats

def test_reach_stats_p2_zero():
    n, n1 = 2000, 1400
    p1 = 0.7 / (n - 1)
    traces = [run_artificial(n, 2, n1, p1, 0.0, seed=mix64(27, i)) for i in range(100)]
    rs = estimate_reach_stats(traces)
    assert rs.inputs.r == 0 and rs.inputs.R == 0
    # mean order of the component holding a random outside vertex
    orders = np.concatenate([t.outside_orders for t in traces])
    assert rs.inputs.Rbar == pytest.approx(orders[orders <= rs.L].sum() / orders.size, rel=1e-12)
    assert rs.inputs.alpha == pytest.approx(1 - n1 / n)
    assert rs.L == reach_cutoff(n) == int(math.log(n) ** 2)


def test_reach_stats_everything_attached():
    n, n1 = 200, 150
    traces = [run_artificial(n, 2, n1, 0.002, 0.999, seed=mix64(28, i)) for i in range(100)]
    rs = estimate_reach_stats(traces)
    assert rs.inputs.Rbar == pytest.approx(0.0, abs=1e-12)
    orders = np.concatenate([t.outside_orders for t in traces])
    assert rs.inputs.r == pytest.approx(np.mean(orders <= rs.L), rel=1e-12)


def test_reach_stats_needs_enough_traces():
    traces = [run_artificial(100, 2, 50, 0.01, 0.01, seed=i) for i in range(99)]
    with pytest.raises(StatisticsError, match="100"):
        estimate_reach_stats(traces)


def test_reach_stats_rejects_mixed_parameters():
    traces = [run_artificial(100, 2, 50, 0.01, 0.01, seed=i) for i in range(100)]
    traces.append(run_artificial(100, 2, 51, 0.01, 0.01, seed=0))
    with pytest.raises(ParameterError):
        estimate_reach_stats(traces)


# --------------------------------------------------------------- records

def test_trace_record_schema():
    four, art = run_exposure_trial(1000, 2, 2.0 / 999, 0.1, seed=9)
    rec = trace_record(3, four, art)
    assert list(rec) == ["trial", "n", "d", "c", "eps", "L1", "L3", "S", "SG", "W", "S_iso",
                         "F1", "F2", "F3"]
    assert rec["trial"] == 3 and rec["L1"] == four.L1 and art.n1 == four.L1
    assert rec["c"] == pytest.approx(2.0)


@pytest.mark.slow
def test_artificial_mean_matches_four_round_mean():
    n, d, c, eps, trials = 10_000, 2, 2.0, 0.1, 2000
    p = c / (n - 1)
    cfg = split_probabilities(p, eps)
    mu1 = attach_coefficients(ModelParams.from_c(n, d, c), eps).mu1
    s = np.array([run_four_rounds(n, d, p, eps, seed=mix64(29, i)).S for i in range(trials)])
    sg = np.array([run_artificial(n, d, int(round(mu1)), cfg.p1, cfg.p2, seed=mix64(30, i)).SG
                   for i in range(trials)])
    se = math.sqrt(s.var(ddof=1) / trials + sg.var(ddof=1) / trials)
    assert abs(sg.mean() - s.mean()) <= 3 * se
