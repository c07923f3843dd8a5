"""Statistical checks of the predictions against Monte Carlo samples."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammaincc, ndtr

from ._errors import DomainError, ParameterError, StatisticsError
from ._validation import check_edge_size, check_int, check_samples
from .components import label_components
from .hypergraph import sample_hnp
from .rng import mix64
from .theory import ModelParams, critical_c, local_probability

KS_MIN_SAMPLES = 100
LOCAL_LAW_MIN_SAMPLES = 10_000
KS_COEFFICIENTS = {0.05: 1.36, 0.01: 1.63}


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Observed integers plus what is needed to regenerate them."""

    values: np.ndarray
    params: ModelParams | None = None
    seed: int = 0
    trials: int = 0
    kind: str = "largest_order"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64).ravel()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if not self.trials:
            object.__setattr__(self, "trials", int(vals.size))

    def metadata(self) -> dict:
        p = self.params
        out = {"kind": self.kind, "seed": int(self.seed), "trials": int(self.trials)}
        if p is not None:
            out.update(n=p.n, d=p.d, c=p.c, p=p.p)
        return out


@dataclass
class TestReport:
    """A statistic, its threshold and the verdict, with reproduction metadata.

    ``relation`` states how the statistic must compare to the threshold for
    a pass: one of ``"<"``, ``"<="``, ``">"``, ``">="``.
    """

    __test__ = False  # not a pytest class

    test: str
    statistic: float
    threshold: float
    relation: str = "<="
    params: dict = field(default_factory=dict)
    seed: int = 0
    trials: int = 0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relation not in ("<", "<=", ">", ">="):
            raise ParameterError(f"unknown relation {self.relation!r}")

    @property
    def passed(self) -> bool:
        s, t = self.statistic, self.threshold
        if isinstance(s, float) and math.isnan(s):
            return False
        return {"<": s < t, "<=": s <= t, ">": s > t, ">=": s >= t}[self.relation]

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "params": dict(self.params),
            "seed": int(self.seed),
            "trials": int(self.trials),
            "statistic": float(self.statistic),
            "threshold": float(self.threshold),
            "pass": bool(self.passed),
            "details": dict(self.details, relation=self.relation),
        }

    def summary_line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.test}: {self.statistic:.6g} {self.relation} {self.threshold:.6g}"


# ------------------------------------------------------------- moments

def moments(samples) -> tuple[float, float]:
    """Sample mean and unbiased variance."""
    x = check_samples(samples, 2)
    return float(x.mean()), float(x.var(ddof=1))


def standard_error(samples) -> float:
    x = check_samples(samples, 2)
    return float(x.std(ddof=1) / math.sqrt(x.size))


# ------------------------------------------------------------------ KS

def ks_critical(trials: int, level: float = 0.01) -> float:
    """Asymptotic Kolmogorov critical value at level 0.05 or 0.01."""
    if level not in KS_COEFFICIENTS:
        raise ParameterError(f"level must be one of {sorted(KS_COEFFICIENTS)}")
    return KS_COEFFICIENTS[level] / math.sqrt(trials)


def ks_normal(samples, mu: float, sigma: float) -> float:
    """sup_x |F_m(x) - Phi(x)| for the standardized sample (x - mu) / sigma."""
    x = check_samples(samples, KS_MIN_SAMPLES)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    z = np.sort((x - mu) / sigma)
    m = z.size
    cdf = ndtr(z)
    above = np.arange(1, m + 1) / m - cdf
    below = cdf - np.arange(m) / m
    return float(max(above.max(), below.max()))


# ----------------------------------------------------------- local law

@dataclass(frozen=True, eq=False)
class LocalLawReport:
    nu: np.ndarray
    empirical_freq: np.ndarray
    predicted: np.ndarray
    samples: int
    mu: float
    sigma: float

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.empirical_freq - self.predicted)

    @property
    def l1(self) -> float:
        return float(self.abs_diff.sum())

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [(int(v), float(e), float(p), float(a))
                for v, e, p, a in zip(self.nu, self.empirical_freq, self.predicted, self.abs_diff)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["nu", "empirical_freq", "predicted", "abs_diff"])
        for v, e, p, a in self.rows():
            w.writerow([v, repr(e), repr(p), repr(a)])
        return buf.getvalue()


def local_law_window(mu: float, sigma: float, halfwidth: float) -> tuple[int, int]:
    """Integer window [round(mu - h sigma), round(mu + h sigma)]."""
    if not halfwidth >= 0:
        raise ParameterError("halfwidth must be non-negative")
    return int(round(mu - halfwidth * sigma)), int(round(mu + halfwidth * sigma))


def local_law_report(samples, mu: float, sigma: float, halfwidth_in_sigmas: float = 1.0,
                     *, min_samples: int = LOCAL_LAW_MIN_SAMPLES) -> LocalLawReport:
    """Per-integer empirical frequencies against the Gaussian point probabilities."""
    x = check_samples(samples, min_samples)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    if np.any(x != np.round(x)):
        raise StatisticsError("local law needs integer samples")
    lo, hi = local_law_window(mu, sigma, halfwidth_in_sigmas)
    if hi < lo:
        raise ParameterError("local-law window is empty")
    nu = np.arange(lo, hi + 1, dtype=np.int64)
    xi = x.astype(np.int64)
    inside = xi[(xi >= lo) & (xi <= hi)]
    freq = np.bincount(inside - lo, minlength=nu.size) / x.size
    pred = np.array([local_probability(float(v), mu, sigma) for v in nu])
    return LocalLawReport(nu, freq, pred, int(x.size), float(mu), float(sigma))


# ------------------------------------------------------------ chi-square

def pool_bins(observed, expected, minimum: float = 5.0) -> tuple[np.ndarray, np.ndarray]:
    """Merge adjacent bins left to right until each expected count reaches ``minimum``.

    A short remainder at the right end joins the last pooled bin.
    """
    o = np.asarray(observed, dtype=np.float64).ravel()
    e = np.asarray(expected, dtype=np.float64).ravel()
    if o.size == 0 or e.size == 0:
        raise StatisticsError("chi-square needs at least one bin")
    if o.shape != e.shape:
        raise ParameterError("observed and expected differ in length")
    if np.any(e < 0) or np.any(o < 0):
        raise ParameterError("counts must be non-negative")
    po, pe = [], []
    acc_o = acc_e = 0.0
    for oi, ei in zip(o, e):
        acc_o += oi
        acc_e += ei
        if acc_e >= minimum:
            po.append(acc_o)
            pe.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if pe:
            po[-1] += acc_o
            pe[-1] += acc_e
        else:
            po.append(acc_o)
            pe.append(acc_e)
    return np.array(po), np.array(pe)


def chi_square(observed_counts, expected_counts, *, ddof: int = 0,
               pool_below: float = 5.0) -> tuple[float, int, float]:
    """Pearson statistic, degrees of freedom and upper-tail p-value after pooling."""
    o, e = pool_bins(observed_counts, expected_counts, pool_below)
    if np.any(e <= 0):
        raise StatisticsError("a pooled bin has zero expected count")
    stat = float(np.sum((o - e) ** 2 / e))
    dof = o.size - 1 - ddof
    if dof < 1:
        raise StatisticsError(f"chi-square has {dof} degrees of freedom after pooling")
    return stat, dof, float(gammaincc(dof / 2.0, stat / 2.0))


# ------------------------------------------------------ linear response

@dataclass(frozen=True)
class LinearResponse:
    """E(S_G | n1) ~ mu_S + lambda_S (n1 - mu1), fitted by weighted least squares."""

    mu_S_hat: float
    lambda_S_hat: float
    stderr: tuple[float, float]
    samples: int
    mu1: float
    groups: int
    quad_coef: float
    quad_stderr: float
    quad_p: float
    lack_of_fit: float
    lack_of_fit_dof: int
    lack_of_fit_p: float
    sigma_S_hat: float

    @property
    def f_statistic(self) -> float:
        """Lack-of-fit chi-square per degree of freedom."""
        return self.lack_of_fit / self.lack_of_fit_dof if self.lack_of_fit_dof else 0.0


def _wls(x: np.ndarray, y: np.ndarray, w: np.ndarray, degree: int):
    a = np.vander(x, degree + 1, increasing=True)
    aw = a * w[:, None]
    cov = np.linalg.pinv(a.T @ aw)
    beta = cov @ (aw.T @ y)
    resid = y - a @ beta
    return beta, cov, float(np.sum(w * resid ** 2))


def _two_sided_normal_p(z: float) -> float:
    return float(2.0 * ndtr(-abs(z)))


def linear_response(groups: Mapping[int, Sequence[float]], mu1: float) -> LinearResponse:
    """Fit group means of S_G against n1 - mu1 with inverse-variance weights.

    Also fits a quadratic to test for curvature (two-sided Wald test) and
    reports the lack-of-fit chi-square of the straight line.
    """
    keys = sorted(groups)
    if len(keys) < 3:
        raise StatisticsError(f"linear_response needs at least 3 distinct n1 values, got {len(keys)}")
    means, variances, counts = [], [], []
    for k in keys:
        v = check_samples(groups[k], 2, f"group n1={k}")
        means.append(v.mean())
        variances.append(v.var(ddof=1) / v.size)
        counts.append(v.size)
    x = np.array(keys, dtype=np.float64) - mu1
    y = np.array(means)
    var = np.array(variances)
    pos = var[var > 0]
    floor = pos.min() * 1e-6 if pos.size else 1.0
    w = 1.0 / np.maximum(var, floor)
    beta, cov, rss = _wls(x, y, w, 1)
    dof = len(keys) - 2
    if len(keys) >= 4:
        qb, qcov, _ = _wls(x, y, w, 2)
        q_se = math.sqrt(max(qcov[2, 2], 0.0))
        q_coef = float(qb[2])
        q_p = _two_sided_normal_p(q_coef / q_se) if q_se > 0 else (1.0 if q_coef == 0 else 0.0)
    else:
        q_coef, q_se, q_p = 0.0, float("nan"), float("nan")
    lof_p = float(gammaincc(dof / 2.0, rss / 2.0)) if dof > 0 else float("nan")
    pooled = float(np.average([v * c for v, c in zip(variances, counts)], weights=counts))
    return LinearResponse(
        mu_S_hat=float(beta[0]), lambda_S_hat=float(beta[1]),
        stderr=(math.sqrt(max(cov[0, 0], 0.0)), math.sqrt(max(cov[1, 1], 0.0))),
        samples=int(sum(counts)), mu1=float(mu1), groups=len(keys),
        quad_coef=q_coef, quad_stderr=q_se, quad_p=q_p,
        lack_of_fit=rss, lack_of_fit_dof=dof, lack_of_fit_p=lof_p,
        sigma_S_hat=math.sqrt(pooled),
    )


def split_halves(groups: Mapping[int, Sequence[float]]) -> tuple[dict, dict]:
    """First and second half of every group, in trial order."""
    a, b = {}, {}
    for k, v in groups.items():
        v = np.asarray(v)
        h = v.size // 2
        a[k], b[k] = v[:h], v[h:]
    return a, b


# -------------------------------------------------------------- q_k

@dataclass(frozen=True)
class QkEstimate:
    """Empirical distribution of the component order of vertex 1."""

    q_hat: np.ndarray  # q_hat[k-1] estimates q_k for k = 1..k_max
    tail: float
    trials: int
    decay_slope: float
    decay_range: tuple[int, int]

    @property
    def gamma_hat(self) -> float:
        return math.exp(self.decay_slope)

    def stderr(self) -> np.ndarray:
        q = self.q_hat
        return np.sqrt(q * (1.0 - q) / self.trials)


def decay_fit(q_hat: np.ndarray, k_lo: int = 5, k_hi: int = 15) -> float:
    """Least-squares slope of log q_k against k over the nonzero estimates in [k_lo, k_hi]."""
    k = np.arange(k_lo, min(k_hi, q_hat.size) + 1)
    q = q_hat[k - 1]
    keep = q > 0
    if keep.sum() < 2:
        raise StatisticsError(f"fewer than two nonzero q_k in [{k_lo}, {k_hi}]")
    slope, _ = np.polyfit(k[keep], np.log(q[keep]), 1)
    return float(slope)


def _vertex_one_order(n: int, d: int, p: float, seed: int) -> int:
    h = sample_hnp(n, d, p, seed)
    labels, sizes = label_components(n, h.edges)
    return int(sizes[labels[0]])


def component_orders_at_vertex(n: int, d: int, p: float, trials: int, seed: int = 0,
                               threads: int = 1) -> np.ndarray:
    from .experiments import run_trials

    return run_trials(lambda i: _vertex_one_order(n, d, p, mix64(seed, i)), trials, threads)


def q_k_empirical(c: float, d: int, n: int, trials: int, k_max: int = 15, seed: int = 0,
                  threads: int = 1, decay_range: tuple[int, int] = (5, 15)) -> QkEstimate:
    """Estimate q_k, the probability that vertex 1 lies in a component of order k."""
    check_edge_size(n, d)
    trials = check_int(trials, "trials", 1)
    k_max = check_int(k_max, "k_max", 1)
    if not c < critical_c(d) - 1e-3:
        raise DomainError(f"q_k estimation needs subcritical c < {critical_c(d) - 1e-3:.6g}, got {c}")
    params = ModelParams.from_c(n, d, c)
    orders = component_orders_at_vertex(n, d, params.p, trials, seed, threads)
    counts = np.bincount(np.minimum(orders, k_max + 1), minlength=k_max + 2)
    q_hat = counts[1:k_max + 1] / trials
    tail = float(counts[k_max + 1] / trials)
    try:
        slope = decay_fit(q_hat, *decay_range)
    except StatisticsError:
        slope = float("nan")
    return QkEstimate(q_hat, tail, trials, slope, decay_range)
