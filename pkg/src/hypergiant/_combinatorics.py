"""Binomial coefficients and binomial variates for very large populations.

Coefficient counts are exact Python integers (``math.comb``) wherever the
caller needs an exact count.  The variate sampler hands populations below
``2**63`` to numpy's BTPE sampler; above that the population is carried as a
float (``exp(lgamma)`` sized) and sampled with Hörmann's BTRS
transformed-rejection method, or by inversion when the mean is small.
"""
from __future__ import annotations

import math

import numpy as np

INT64_LIMIT = 1 << 63


def comb(n: int, k: int) -> int:
    """Exact C(n, k); zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def comb_real(x: float, k: int) -> float:
    """C(x, k) for real ``x`` via the falling factorial; used with non-integer means."""
    if k < 0:
        return 0.0
    out = 1.0
    for i in range(k):
        out *= (x - i) / (i + 1)
    return out


def log_comb(n: float, k: float) -> float:
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


def _log_falling_ratio(n: float, m: int, k: int) -> float:
    """lgamma(n-m+1) - lgamma(n-k+1) without cancellation for huge ``n``."""
    if k == m:
        return 0.0
    lo, hi = (m, k) if k > m else (k, m)
    j = np.arange(lo, hi, dtype=np.float64)
    s = float(np.sum(np.log(n) + np.log1p(-j / n)))
    return s if k > m else -s


def _binomial_inversion(rng: np.random.Generator, n: float, p: float) -> int:
    q = 1.0 - p
    u = rng.random()
    k = 0
    pk = math.exp(n * math.log1p(-p))
    cdf = pk
    ratio = p / q
    while u > cdf:
        pk *= (n - k) / (k + 1) * ratio
        k += 1
        cdf += pk
        if pk == 0.0 and cdf < u:
            # float exhaustion far in the tail; restart the draw
            u = rng.random()
            k, pk = 0, math.exp(n * math.log1p(-p))
            cdf = pk
    return k


def _binomial_btrs(rng: np.random.Generator, n: float, p: float) -> int:
    # Hörmann (1993), "The generation of binomial random variates", algorithm BTRS.
    q = 1.0 - p
    spq = math.sqrt(n * p * q)
    b = 1.15 + 2.53 * spq
    a = -0.0873 + 0.0248 * b + 0.01 * p
    c = n * p + 0.5
    v_r = 0.92 - 4.2 / b
    alpha = (2.83 + 5.1 / b) * spq
    lpq = math.log(p / q)
    m = math.floor((n + 1) * p)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + c)
        if k < 0 or k > n:
            continue
        if us >= 0.07 and v <= v_r:
            return int(k)
        lv = math.log(v * alpha / (a / (us * us) + b))
        # h - lgamma(k+1) - lgamma(n-k+1), split so the huge-n parts cancel exactly
        bound = (math.lgamma(m + 1.0) - math.lgamma(k + 1.0)
                 + _log_falling_ratio(n, m, k) + (k - m) * lpq)
        if lv <= bound:
            return int(k)


def sample_binomial(rng: np.random.Generator, n: int, p: float) -> int:
    """One Binomial(n, p) variate for an arbitrarily large integer ``n``."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    if n == 0 or p == 0.0:
        return 0
    if p == 1.0:
        return n
    if n < INT64_LIMIT:
        return int(rng.binomial(n, p))
    nf = float(n)
    flip = p > 0.5
    pp = 1.0 - p if flip else p
    if nf * pp < 10.0:
        k = _binomial_inversion(rng, nf, pp)
    else:
        k = _binomial_btrs(rng, nf, pp)
    return n - k if flip else k
