"""Closed-form predictions for the giant component of H_d(n, p).

Everything here is a pure function of its arguments.  Average degree is
parametrised by ``c = C(n-1, d-1) * p``; the supercritical regime is
``c > 1/(d-1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._combinatorics import comb, comb_real, log_comb
from ._erf import normal_cdf, normal_sf
from ._errors import DomainError, ParameterError
from ._validation import check_edge_size, check_positive, check_probability

SQRT_2PI = math.sqrt(2.0 * math.pi)


def critical_c(d: int) -> float:
    return 1.0 / (d - 1)


@dataclass(frozen=True)
class ModelParams:
    """(n, d, c, p) with c = C(n-1, d-1) p."""

    n: int
    d: int
    c: float
    p: float

    def __post_init__(self):
        check_edge_size(self.n, self.d)
        check_probability(self.p, "p")
        expect = comb(self.n - 1, self.d - 1) * self.p
        if not math.isclose(self.c, expect, rel_tol=1e-12, abs_tol=1e-300):
            raise ParameterError(f"c={self.c} inconsistent with p: C(n-1,d-1)p={expect}")

    @classmethod
    def from_c(cls, n: int, d: int, c: float) -> "ModelParams":
        check_edge_size(n, d)
        return cls(n, d, float(c), c / comb(n - 1, d - 1))

    @classmethod
    def from_p(cls, n: int, d: int, p: float) -> "ModelParams":
        check_edge_size(n, d)
        return cls(n, d, comb(n - 1, d - 1) * p, p)

    @property
    def supercritical(self) -> bool:
        return self.c > critical_c(self.d)


@dataclass(frozen=True)
class GiantPrediction:
    rho: float
    mu: float
    sigma2: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def _rho_gap(rho: float, c: float, d: int) -> float:
    return rho - math.exp(c * (rho ** (d - 1) - 1.0))


def _delta_gap(delta: float, c: float, d: int) -> float:
    """Gap at rho = 1 - delta, accurate for small delta."""
    return -delta - math.expm1(c * math.expm1((d - 1) * math.log1p(-delta)))


def _polish(rho: float, c: float, d: int) -> float:
    """A few Newton steps on the gap, kept only while they shrink it."""
    best, gap = rho, abs(_rho_gap(rho, c, d))
    for _ in range(4):
        e = math.exp(c * (best ** (d - 1) - 1.0))
        slope = 1.0 - c * (d - 1) * best ** (d - 2) * e
        if slope == 0.0:
            break
        nxt = best - _rho_gap(best, c, d) / slope
        g = abs(_rho_gap(nxt, c, d))
        if not 0.0 < nxt < 1.0 or g >= gap:
            break
        best, gap = nxt, g
    return best


def solve_rho(c: float, d: int, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Root in (0, 1) of rho = exp(c (rho^(d-1) - 1)).

    Fixed-point iteration from exp(-c) climbs monotonically to the stable
    root; if it has not met ``tol`` after ``max_iter`` steps (close to the
    critical point) bisection on the gap function takes over.  Newton steps
    then polish the root to near machine precision.
    """
    if d < 2:
        raise ParameterError("d must be >= 2")
    check_positive(tol, "tol")
    if not c > critical_c(d):
        raise DomainError(f"c={c} is not supercritical for d={d}: only the trivial root rho=1")
    rho = math.exp(-c)
    for _ in range(max_iter):
        rho = math.exp(c * (rho ** (d - 1) - 1.0))
        if abs(_rho_gap(rho, c, d)) <= tol:
            if 0.0 < rho < 1.0:
                return _polish(rho, c, d)
            break
    # bisect on delta = 1 - rho, where the gap is evaluated without cancellation
    lo, hi = 1e-12, 1.0 - 1e-16
    if _delta_gap(lo, c, d) <= 0 or _delta_gap(hi, c, d) >= 0:
        raise DomainError(f"no bracketed root for c={c}, d={d}")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        g = _delta_gap(mid, c, d)
        if hi - lo <= 1e-17 * max(1.0, mid):
            break
        if g > 0:
            lo = mid
        else:
            hi = mid
    return _polish(1.0 - 0.5 * (lo + hi), c, d)


def giant_variance(rho: float, c: float, d: int, n: float) -> float:
    num = rho * (1.0 - rho + c * (d - 1) * (rho - rho ** (d - 1))) * n
    den = (1.0 - c * (d - 1) * rho ** (d - 1)) ** 2
    return num / den


def predict(params: ModelParams, tol: float = 1e-12) -> GiantPrediction:
    """Mean (1-rho) n and variance sigma^2 of the largest component order."""
    rho = solve_rho(params.c, params.d, tol)
    return GiantPrediction(rho, (1.0 - rho) * params.n, giant_variance(rho, params.c, params.d, params.n))


def local_probability(nu: float, mu: float, sigma: float) -> float:
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    z = (nu - mu) / sigma
    return math.exp(-0.5 * z * z) / (SQRT_2PI * sigma)


def interval_probability(a: float, b: float) -> float:
    """P[a <= N(0,1) <= b]."""
    if a > b:
        raise ParameterError("interval_probability needs a <= b")
    if a >= 0:
        return normal_sf(a) - normal_sf(b)
    return normal_cdf(b) - normal_cdf(a)


def binomial_exact_pmf(n: int, p: float, x: int) -> float:
    check_probability(p, "p")
    if x < 0 or x > n or x != int(x):
        return 0.0
    x = int(x)
    if p == 0.0:
        return 1.0 if x == 0 else 0.0
    if p == 1.0:
        return 1.0 if x == n else 0.0
    return math.exp(log_comb(n, x) + x * math.log(p) + (n - x) * math.log1p(-p))


def binomial_local_approx(n: int, p: float, x: float) -> float:
    """Gaussian local approximation to P[Bin(n, p) = x]."""
    check_probability(p, "p")
    var = n * p * (1.0 - p)
    if not var > 0:
        raise DomainError("degenerate binomial: n p (1-p) must be positive")
    return math.exp(-((x - n * p) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def chernoff_bound(nu: int, q: float, t: float) -> float:
    """Bound on P[|Bin(nu, q) - nu q| >= t]."""
    if not t > 0:
        raise ParameterError("t must be positive")
    check_probability(q, "q")
    return 2.0 * math.exp(-t * t / (2.0 * (nu * q + t / 3.0)))


def binomial_two_sided_tail(nu: int, q: float, t: float) -> float:
    """Exact P[|Bin(nu, q) - nu q| >= t] by summing the pmf."""
    mean = nu * q
    return sum(binomial_exact_pmf(nu, q, x) for x in range(nu + 1) if abs(x - mean) >= t)


def subcritical_bound(c0: float, d: int, n: float) -> float:
    """Order bound for the largest component when c <= c0 < 1/(d-1)."""
    if not c0 < critical_c(d):
        raise DomainError(f"c0={c0} is not subcritical for d={d}")
    return 3.0 * (d - 1) ** 2 * (1.0 - (d - 1) * c0) ** -2 * math.log(n)


# ------------------------------------------------------ attachment to G

@dataclass(frozen=True)
class AttachCoefficients:
    """Retention coefficient xi(z) and outside degree zeta(z) for rounds R1'-R3'.

    A vertex of V\\G whose component in H_{2,G} has order k is attached to G
    with probability about 1 - xi(z)^k, where z = (n1 - mu1) / sigma1.
    """

    xi0: float
    xi_slope: float
    zeta0: float
    zeta_slope: float
    sigma1: float
    mu1: float
    rho1: float
    p1: float
    p2: float
    n1: float
    z: float
    n: int
    d: int
    p: float

    @property
    def xi_of_z(self) -> tuple[float, float]:
        """(intercept, slope) of the affine map z -> xi(z)."""
        return self.xi0, self.xi_slope

    @property
    def zeta_of_z(self) -> tuple[float, float]:
        """(value, derivative) of z -> zeta(z) at z = 0."""
        return self.zeta0, self.zeta_slope

    def xi(self, z: float | None = None) -> float:
        z = self.z if z is None else z
        return self.xi0 + self.xi_slope * z

    def zeta(self, z: float | None = None) -> float:
        z = self.z if z is None else z
        return comb_real(self.n - self.mu1 - z * self.sigma1, self.d - 1) * self.p

    def attach_probability(self, k: int, z: float | None = None) -> float:
        return 1.0 - self.xi(z) ** k

    def isolated_attach_probability(self, n1: int | None = None) -> float:
        """Exact per-vertex probability 1 - (1-p2)^C(n1, d-1) for an isolated vertex."""
        n1 = int(round(self.n1)) if n1 is None else n1
        return -math.expm1(comb(n1, self.d - 1) * math.log1p(-self.p2))


def split_p(p: float, eps: float) -> tuple[float, float]:
    p1 = (1.0 - eps) * p
    if p1 >= 1.0:
        raise DomainError("p1 = 1 leaves no room for a second round")
    return p1, (p - p1) / (1.0 - p1)


def attach_coefficients(params: ModelParams, eps: float, n1: float | None = None) -> AttachCoefficients:
    """xi0, xi(z), zeta(z) for the round-1 giant of order ``n1`` (default mu1)."""
    if not 0.0 <= eps < 1.0:
        raise ParameterError("eps must lie in [0, 1)")
    n, d, p = params.n, params.d, params.p
    c1 = (1.0 - eps) * params.c
    if not c1 > critical_c(d):
        raise DomainError(f"round-1 parameter c1={c1} is subcritical for d={d}")
    rho1 = solve_rho(c1, d)
    mu1 = (1.0 - rho1) * n
    sigma1 = math.sqrt(giant_variance(rho1, c1, d, n))
    p1, p2 = split_p(p, eps)
    n1 = mu1 if n1 is None else float(n1)
    z = (n1 - mu1) / sigma1
    xi0 = math.exp(-p2 * (comb(n - 1, d - 1) - comb_real(n - mu1, d - 1)))
    xi_slope = xi0 * sigma1 * p2 * comb_real(n - mu1, d - 2)
    zeta0 = comb_real(n - mu1, d - 1) * p
    zeta_slope = -sigma1 * comb_real(n - mu1, d - 2) * p
    return AttachCoefficients(xi0, xi_slope, zeta0, zeta_slope, sigma1, mu1, rho1,
                              p1, p2, n1, z, n, d, p)


# -------------------------------------------------------- variance of S_G

@dataclass(frozen=True)
class GammaInputs:
    """Reach statistics of the attachment count S_G (see ``exposure.estimate_reach_stats``)."""

    r: float
    R: float
    Rbar: float
    alpha: float
    c: float
    eps: float
    d: int
    n: int

    def __post_init__(self):
        if not 0.0 <= self.r <= self.R + 1e-15:
            raise ParameterError(f"need 0 <= r <= R, got r={self.r}, R={self.R}")
        if self.Rbar < 0:
            raise ParameterError("Rbar must be non-negative")
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError("alpha must lie in [0, 1]")


def gamma_variance(inputs: GammaInputs) -> tuple[float, float]:
    """(Gamma, alpha^2 Gamma n + alpha r (1-r) n)."""
    r, R, Rb, a = inputs.r, inputs.R, inputs.Rbar, inputs.alpha
    c, eps, d, n = inputs.c, inputs.eps, inputs.d, inputs.n
    if r <= 0:
        raise DomainError("Gamma divides by r; r must be positive")
    if d == 2:
        ratio = 0.0
    elif a == 1.0:
        ratio = (d - 2) / (d - 1)  # limit of (1 - a^(d-2)) / (1 - a^(d-1)) as a -> 1
    else:
        ratio = (1.0 - a ** (d - 2)) / (1.0 - a ** (d - 1))
    gamma = ((1.0 - R) * (R - r)
             + ((d - 1) * c - 1.0) * R * R / r
             + R
             + (d - 1) * (1.0 - a ** (d - 2)) * eps * c * Rb * Rb
             + ratio * Rb)
    return gamma, a * a * gamma * n + a * r * (1.0 - r) * n


def compose_distributions(sigma1: float, sigma3: float, sigmaS: float, lambdaS: float,
                          z: float) -> tuple[float, float]:
    """Closed form of the convolution of the round-1 and attachment laws.

    Evaluates (2 pi sigmaS)^-1 * integral of
    exp(-x^2/2 - ((1+lambdaS) x sigma1/sigmaS - z sigma3/sigmaS)^2 / 2) dx
    and returns it with the implied total variance
    tau^2 = sigmaS^2 + (1+lambdaS)^2 sigma1^2.
    """
    for name, val in (("sigma1", sigma1), ("sigma3", sigma3), ("sigmaS", sigmaS)):
        if not val > 0:
            raise DomainError(f"{name} must be positive")
    tau2 = sigmaS ** 2 + (1.0 + lambdaS) ** 2 * sigma1 ** 2
    density = math.exp(-(z * sigma3) ** 2 / (2.0 * tau2)) / math.sqrt(2.0 * math.pi * tau2)
    return density, tau2
