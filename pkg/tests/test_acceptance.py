"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, shown in the terminal summary.
"""
import math
import time

import numpy as np
import pytest
from scipy.stats import binom

from hypergiant import (ModelParams, chi_square, components, components_oracle, estimate_reach_stats,
                        ks_normal, largest_order, linear_response, local_law_report, mix64, predict,
                        run_four_rounds, sample_hnp, solve_rho, split_probabilities, stein_audit)
from hypergiant._combinatorics import comb
from hypergiant.experiments import artificial_sg, artificial_traces, default_threads, sample_largest_orders
from hypergiant.exposure import isolated_attach, resample_isolated, w_lower_bound
from hypergiant.stats import ks_critical, moments, split_halves
from hypergiant.theory import (attach_coefficients, binomial_exact_pmf, binomial_local_approx,
                               subcritical_bound)

pytestmark = pytest.mark.acceptance
THREADS = default_threads()

# exposure experiments share d = 2, c = 2, eps = 0.1, n = 2e4
EXP_N, EXP_D, EXP_C, EXP_EPS = 20_000, 2, 2.0, 0.1


@pytest.fixture(scope="module")
def exposure_setup():
    params = ModelParams.from_c(EXP_N, EXP_D, EXP_C)
    cfg = split_probabilities(params.p, EXP_EPS)
    mu1 = attach_coefficients(params, EXP_EPS).mu1
    return params, cfg, mu1


@pytest.fixture(scope="module")
def artificial_at_mu1(exposure_setup):
    _, cfg, mu1 = exposure_setup
    return artificial_traces(EXP_N, EXP_D, int(round(mu1)), cfg.p1, cfg.p2, 2000, seed=8,
                             threads=THREADS)


def test_criterion_01_rho_solver(verdict):
    grid = [(d, c) for d in (2, 3, 4, 5)
            for c in np.linspace(1 / (d - 1) + 0.1, 10, 52)[1:-1]]
    assert len(grid) == 200
    start = time.perf_counter()
    worst = 0.0
    for d, c in grid:
        rho = solve_rho(float(c), d)
        worst = max(worst, abs(rho - math.exp(c * (rho ** (d - 1) - 1))))
    elapsed = time.perf_counter() - start
    verdict("criterion 1 rho solver", worst <= 1e-12 and elapsed < 1.0,
            f"max residual {worst:.3e} <= 1e-12, {elapsed:.3f} s < 1 s")


def test_criterion_02_mean_and_variance(verdict):
    n, trials = 20_000, 1000
    params = ModelParams.from_c(n, 2, 2.0)
    x = sample_largest_orders(params, trials, seed=2, threads=THREADS).values
    mean, var = moments(x)
    se = math.sqrt(var / trials)
    target_mean, target_var = 0.796812 * n, 0.45944 * n
    ok_mean = abs(mean - target_mean) <= 3 * se
    rel_var = var / target_var - 1
    verdict("criterion 2 mean/variance of L", ok_mean and abs(rel_var) <= 0.15,
            f"|mean - {target_mean:.1f}| = {abs(mean - target_mean):.2f} <= 3 SE = {3 * se:.2f}; "
            f"variance {var:.1f} vs {target_var:.1f} ({rel_var:+.1%}, limit 15%)")


def test_criterion_03_clt(verdict):
    params = ModelParams.from_c(10_000, 3, 1.5)
    g = predict(params)
    x = sample_largest_orders(params, 1000, seed=3, threads=THREADS).values
    D = ks_normal(x, g.mu, g.sigma)
    crit = ks_critical(1000, 0.01)
    verdict("criterion 3 CLT", D < crit, f"KS distance {D:.4f} < {crit:.4f}")


def test_criterion_04_local_limit(verdict):
    params = ModelParams.from_c(5000, 2, 2.0)
    g = predict(params)
    x = sample_largest_orders(params, 20_000, seed=4, threads=THREADS).values
    rep = local_law_report(x, g.mu, g.sigma, 1.0)
    verdict("criterion 4 local limit", rep.l1 < 0.10,
            f"L1 over {rep.nu.size} integers in mu +- sigma = {rep.l1:.4f} < 0.10")


def test_criterion_05_subcritical_bound(verdict):
    n = 100_000
    params = ModelParams.from_c(n, 2, 0.5)
    bound = subcritical_bound(0.5, 2, n)
    assert bound == pytest.approx(138.2, abs=0.05)
    x = sample_largest_orders(params, 200, seed=5, threads=THREADS).values
    frac = float(np.mean(x <= bound))
    verdict("criterion 5 subcritical bound", frac == 1.0,
            f"L <= {bound:.1f} in {frac:.1%} of 200 trials (max L = {x.max()})")


def test_criterion_06_exposure_consistency(verdict, exposure_setup):
    params, _, _ = exposure_setup
    trials = 500
    equal, edges = 0, []
    for i in range(trials):
        tr = run_four_rounds(EXP_N, EXP_D, params.p, EXP_EPS, seed=mix64(6, i))
        equal += tr.orders[2] == tr.orders[3]
        edges.append(tr.H4.m)
    total = comb(EXP_N, EXP_D)
    target = total * params.p
    se = math.sqrt(total * params.p * (1 - params.p) / trials)
    gap = abs(float(np.mean(edges)) - target)
    verdict("criterion 6 exposure consistency", equal == trials and gap <= 3 * se,
            f"L(H3) = L(H4) in {equal}/{trials}; |mean edges - {target:.1f}| = {gap:.2f} <= 3 SE = {3 * se:.2f}")


def test_criterion_07_isolated_binomial(verdict, exposure_setup, artificial_at_mu1):
    _, _, mu1 = exposure_setup
    n1 = int(round(mu1))
    frozen = artificial_at_mu1[0]
    _, (size, q) = isolated_attach(frozen)
    s = resample_isolated(frozen, 5000, seed=7)
    support = np.arange(size + 1)
    stat, dof, pval = chi_square(np.bincount(s, minlength=size + 1), binom.pmf(support, size, q) * s.size)
    floor = w_lower_bound(EXP_N, n1, EXP_C)
    frac = float(np.mean([tr.W.size >= floor for tr in artificial_at_mu1]))
    verdict("criterion 7 conditional binomial S_iso", pval > 0.01 and frac >= 0.99,
            f"chi2 = {stat:.2f} on {dof} dof, p = {pval:.3f} > 0.01; "
            f"|W| >= {floor:.1f} in {frac:.1%} of {len(artificial_at_mu1)} traces (>= 99%)")


def test_criterion_08_variance_formula(verdict, artificial_at_mu1):
    rs = estimate_reach_stats(artificial_at_mu1)
    pred, emp = rs.predicted_variance, rs.sg_var
    rel = pred / emp - 1
    verdict("criterion 8 variance formula", abs(rel) <= 0.20,
            f"alpha^2 Gamma n + alpha r(1-r) n = {pred:.1f} vs empirical Var(S_G) = {emp:.1f} "
            f"({rel:+.1%}, limit 20%); r = {rs.inputs.r:.4f}, R = {rs.inputs.R:.4f}, "
            f"Rbar = {rs.inputs.Rbar:.4f}, Gamma = {rs.gamma:.4f}")


def test_criterion_09_linear_response(verdict, exposure_setup):
    _, cfg, mu1 = exposure_setup
    groups = {}
    for j, off in enumerate((-300, -150, 0, 150, 300)):
        n1 = int(round(mu1)) + off
        groups[n1] = artificial_sg(EXP_N, EXP_D, n1, cfg.p1, cfg.p2, 1000, seed=9,
                                   threads=THREADS, offset=1000 * j)
    fit = linear_response(groups, mu1)
    a, b = split_halves(groups)
    halves = [linear_response(h, mu1).lambda_S_hat for h in (a, b)]
    drift = max(abs(h / fit.lambda_S_hat - 1) for h in halves)
    verdict("criterion 9 linear response", fit.quad_p > 0.01 and drift <= 0.20,
            f"quadratic term p = {fit.quad_p:.3f} > 0.01; lambda_S = {fit.lambda_S_hat:.4f}, "
            f"halves {halves[0]:.4f} / {halves[1]:.4f} (max drift {drift:.1%} <= 20%)")


def test_criterion_10_stein_audit(verdict):
    start = time.perf_counter()
    rep = stein_audit(12, 3, 0.05, k_max=3, trials=100, seed=10, mc_draws=100_000)
    elapsed = time.perf_counter() - start
    v, f = rep.details["violations"], rep.details["factorization"]
    verdict("criterion 10 Stein audit", rep.passed and elapsed < 120,
            f"violations removal={v['removal']} overlap={v['overlap']} chain={v['chain']}; "
            f"{f['outside_tolerance']} of {f['sets']} sets beyond 4 SE (max z {f['max_z']:.2f}); "
            f"{elapsed:.0f} s < 120 s")


def test_criterion_11_binomial_llt(verdict):
    spot = binomial_local_approx(100, 0.5, 50), binomial_exact_pmf(100, 0.5, 50)
    spot_ok = abs(spot[0] - 0.0797885) <= 5e-8 and abs(spot[1] - 0.0795892) <= 5e-8
    worst, where = 0.0, None
    for p in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95):
        for var in (25, 50, 100, 400, 1600, 10_000):
            n = math.ceil(var / (p * (1 - p)))
            s = math.sqrt(n * p * (1 - p))
            for x in range(math.ceil(n * p - 2 * s), math.floor(n * p + 2 * s) + 1):
                err = abs(binomial_local_approx(n, p, x) / binomial_exact_pmf(n, p, x) - 1)
                if err > worst:
                    worst, where = err, (n, p, x)
    verdict("criterion 11 binomial LLT", spot_ok and worst <= 0.01,
            f"spot {spot[0]:.7f} vs {spot[1]:.7f}; max relative error {worst:.4f} (limit 0.01) "
            f"over np(1-p) >= 25, |x - np| <= 2 sd (worst at n={where[0]}, p={where[1]}, x={where[2]})")


def test_criterion_12_oracle_equivalence(verdict):
    same = 0
    for i in range(1000):
        rng = np.random.default_rng(mix64(12, i))
        d = (2, 3, 4)[i % 3]
        n = int(rng.integers(d, 13))
        p = min(1.0, float(rng.uniform(0, 1.5)) / comb(n - 1, d - 1))
        h = sample_hnp(n, d, p, seed=rng)
        same += components(h).same_partition(components_oracle(h))
    verdict("criterion 12 oracle equivalence", same == 1000,
            f"{same}/1000 instances identical to the BFS oracle (n <= 12, d in 2,3,4)")
