"""Distribution of |k|/sqrt(x): KS uniformity test, mean and count model."""

from __future__ import annotations

import math
from dataclasses import dataclass


def kolmogorov_sf(lam: float, terms: int = 100) -> float:
    """P(K > lam) for the limiting Kolmogorov distribution.

    Q(lam) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2).
    """
    if lam <= 0:
        return 1.0
    if lam < 0.15:
        # 1 - Q(lam) < 1e-20 here, and the series converges slowly
        return 1.0
    total = 0.0
    for j in range(1, max(terms, 25) + 1):
        term = math.exp(-2.0 * j * j * lam * lam)
        total += term if j % 2 else -term
        if term < 1e-18:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_uniform(samples, upper: float) -> tuple[float, float]:
    """One-sample KS test of `samples` against Uniform(0, upper).

    Returns (D, p) with the asymptotic p-value for sqrt(N) * D.
    """
    xs = sorted(float(s) for s in samples)
    n = len(xs)
    if n == 0:
        raise ValueError("ks_uniform needs at least one sample")
    if upper <= 0:
        raise ValueError("upper must be positive")
    d = 0.0
    for i, v in enumerate(xs):
        f = min(max(v / upper, 0.0), 1.0)
        d = max(d, (i + 1) / n - f, f - i / n)
    return d, kolmogorov_sf(math.sqrt(n) * d)


def mean_ratio(samples) -> float:
    vals = [float(s) for s in samples]
    if not vals:
        raise ValueError("mean of empty sample")
    return math.fsum(vals) / len(vals)


def count_model(X: float, n: float, coeff: float = 0.80, base: float = math.e) -> float:
    """Expected number of x < X with |k| <= n sqrt(x), as coeff * n * log(X)."""
    if X <= 1 or n < 1:
        raise ValueError("count_model needs X > 1 and n >= 1")
    return coeff * n * math.log(X, base)


def histogram(samples, upper: int) -> list[int]:
    """Counts per unit bin (i, i+1] for i in 0..upper-1."""
    bins = [0] * upper
    for s in samples:
        v = float(s)
        idx = min(max(math.ceil(v) - 1, 0), upper - 1)
        bins[idx] += 1
    return bins


@dataclass
class StatsReport:
    n: int
    upper: int
    X: int
    mean: float
    D: float
    p: float
    model: float
    bins: list[int]

    def render(self) -> str:
        lines = [
            f"N\t{self.n}",
            f"mean\t{self.mean:.3f}",
            f"D\t{self.D:.4f}",
            f"p\t{self.p:.4f}",
            f"model\t{self.model:.1f}\t(0.80 * {self.upper} * ln {self.X})",
            f"observed\t{self.n}",
            "bin\tcount",
        ]
        lines += [f"({i},{i + 1}]\t{c}" for i, c in enumerate(self.bins)]
        return "\n".join(lines)


def analyze(ratios, upper: int, X: int) -> StatsReport:
    ratios = [float(r) for r in ratios]
    d, p = ks_uniform(ratios, upper)
    return StatsReport(len(ratios), upper, X, mean_ratio(ratios), d, p,
                       count_model(X, upper), histogram(ratios, upper))
