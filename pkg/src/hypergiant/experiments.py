"""Seeded Monte Carlo drivers.

Trial ``i`` always uses seed ``mix64(master_seed, i)`` and its result is
stored at index ``i``, so output does not depend on the thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

from ._validation import check_int
from .components import largest_order
from .exposure import run_artificial, run_exposure_trial, trace_record
from .hypergraph import sample_hnp
from .rng import mix64
from .stats import SampleSet
from .theory import ModelParams

T = TypeVar("T")


def map_trials(fn: Callable[[int], T], trials: int, threads: int = 1) -> list[T]:
    """[fn(0), ..., fn(trials-1)], evaluated on up to ``threads`` workers."""
    trials = check_int(trials, "trials", 0)
    threads = check_int(threads, "threads", 1)
    if threads == 1 or trials < 2:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials), chunksize=max(1, trials // (8 * threads))))


def run_trials(fn: Callable[[int], float], trials: int, threads: int = 1,
               dtype=np.int64) -> np.ndarray:
    return np.asarray(map_trials(fn, trials, threads), dtype=dtype)


def sample_largest_orders(params: ModelParams, trials: int, seed: int = 0,
                          threads: int = 1) -> SampleSet:
    """L(H_d(n, p)) over independent seeded trials."""
    n, d, p = params.n, params.d, params.p
    vals = run_trials(lambda i: largest_order(sample_hnp(n, d, p, mix64(seed, i))), trials, threads)
    return SampleSet(vals, params, seed, trials)


def exposure_records(params: ModelParams, eps: float, trials: int, seed: int = 0,
                     threads: int = 1, n1: int | None = None) -> list[dict]:
    """One JSON-ready record per trial of the four-round and artificial processes."""
    def one(i):
        four, art = run_exposure_trial(params.n, params.d, params.p, eps, mix64(seed, i), n1)
        rec = trace_record(i, four, art)
        rec["H4_edges"] = int(four.H4.m)
        return rec

    return map_trials(one, trials, threads)


def artificial_traces(n: int, d: int, n1: int, p1: float, p2: float, trials: int,
                      seed: int = 0, threads: int = 1, offset: int = 0):
    """Artificial traces for trials offset..offset+trials-1."""
    return map_trials(lambda i: run_artificial(n, d, n1, p1, p2, mix64(seed, offset + i)),
                      trials, threads)


def artificial_sg(n: int, d: int, n1: int, p1: float, p2: float, trials: int,
                  seed: int = 0, threads: int = 1, offset: int = 0) -> np.ndarray:
    """S_G only, without keeping the traces."""
    return run_trials(lambda i: run_artificial(n, d, n1, p1, p2, mix64(seed, offset + i)).SG,
                      trials, threads)


def response_offsets(n: int, spread: float = 0.6, groups: int = 5) -> list[int]:
    """Symmetric n1 offsets spanning +-n**spread."""
    half = n ** spread
    return [int(round(x)) for x in np.linspace(-half, half, groups)]


def default_threads() -> int:
    return max(1, min(8, (os.cpu_count() or 1)))

