"""Brute-force scan of k(x) over an interval of x."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from hallsearch.evaluator import Hit, make_hit
from hallsearch.exact_arith import hall_k, sqrt_ratio_decimal

log = logging.getLogger(__name__)

LARGE_SCAN = 4 * 10 ** 8


@dataclass(frozen=True)
class RatioSample:
    x: int
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("samples exclude k = 0")

    @property
    def exact(self) -> tuple[int, int]:
        """|k|/sqrt(x) as the pair (k^2, x)."""
        return self.k * self.k, self.x

    def decimal(self, digits: int = 6) -> str:
        return sqrt_ratio_decimal(self.k * self.k, self.x, digits)

    @property
    def ratio(self) -> float:
        return abs(self.k) / math.sqrt(self.x)


def _scan_range(x_lo: int, x_hi: int, n_max: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    samples, hits = [], []
    n2 = n_max * n_max
    isqrt = math.isqrt
    for x in range(x_lo, x_hi + 1):
        c = x * x * x
        s = isqrt(c)
        k = c - s * s
        if k > s:
            # nearest root is s + 1
            k -= 2 * s + 1
        kk = k * k
        if kk <= n2 * x and k:
            samples.append((x, k))
            if kk <= x:
                hits.append((x, k))
    return samples, hits


def _partitions(x_lo: int, x_hi: int, parts: int) -> list[tuple[int, int]]:
    size = -(-(x_hi - x_lo + 1) // parts)
    return [(lo, min(lo + size - 1, x_hi)) for lo in range(x_lo, x_hi + 1, size)]


def brute_scan(x_lo: int, x_hi: int, n_max: int = 1, workers: int = 1,
               allow_large: bool = False) -> tuple[list[RatioSample], list[Hit]]:
    """Evaluate k(x) for every x in [x_lo, x_hi].

    Returns the samples with |k| <= n_max * sqrt(x) and the hits with
    |k| <= sqrt(x), both in increasing x.
    """
    if not 2 <= x_lo <= x_hi:
        raise ValueError(f"need 2 <= x_lo <= x_hi, got [{x_lo}, {x_hi}]")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if x_hi > LARGE_SCAN:
        if not allow_large:
            raise ValueError(f"x_hi > {LARGE_SCAN} needs allow_large=True")
        log.warning("brute scan up to %d will take a long time", x_hi)
    if workers > 1:
        parts = _partitions(x_lo, x_hi, workers * 4)
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_scan_range, *zip(*parts), [n_max] * len(parts)))
    else:
        results = [_scan_range(x_lo, x_hi, n_max)]
    samples, hits = [], []
    for raw_samples, raw_hits in results:
        samples.extend(RatioSample(x, k) for x, k in raw_samples)
        for x, k in raw_hits:
            pt = hall_k(x)
            assert pt.k == k, (x, k, pt)
            hits.append(make_hit(pt, "brute"))
    return samples, hits
