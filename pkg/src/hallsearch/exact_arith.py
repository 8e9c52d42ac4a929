"""Integer primitives and the exact value k(x) = x^3 - round(x^(3/2))^2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def isqrt(n: int) -> int:
    """Floor square root of a nonnegative integer."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    # math.isqrt is exact for arbitrary-size ints.
    return math.isqrt(n)


def iroot(n: int, q: int) -> int:
    """Largest r >= 0 with r**q <= n."""
    if n < 0 or q < 1:
        raise ValueError("iroot needs n >= 0 and q >= 1")
    if q == 1 or n < 2:
        return n
    if q == 2:
        return math.isqrt(n)
    # Newton from an upper bound; integer steps decrease monotonically.
    r = 1 << -(-n.bit_length() // q)
    while True:
        s = ((q - 1) * r + n // r ** (q - 1)) // q
        if s >= r:
            break
        r = s
    while r ** q > n:
        r -= 1
    while (r + 1) ** q <= n:
        r += 1
    return r


def nearest_root_square(n: int) -> int:
    """The integer y minimizing |n - y^2|.

    The minimizer is unique: a tie would need 2n = 2s^2 + 2s + 1.
    """
    if n < 1:
        raise ValueError(f"nearest_root_square needs n >= 1, got {n}")
    s = math.isqrt(n)
    # n - s^2 > (s+1)^2 - n  <=>  n - s^2 > s
    return s + 1 if n - s * s > s else s


@dataclass(frozen=True)
class HallPoint:
    x: int
    y: int
    k: int

    def __post_init__(self):
        if self.x ** 3 - self.y ** 2 != self.k:
            raise ValueError(f"x^3 - y^2 != k for {self}")

    @property
    def ratio(self) -> float:
        """sqrt(x)/|k| as a float, for display only."""
        return math.sqrt(self.x) / abs(self.k) if self.k else math.inf


def hall_k(x: int) -> HallPoint:
    if x < 2:
        raise ValueError(f"hall_k needs x >= 2, got {x}")
    c = x * x * x
    y = nearest_root_square(c)
    return HallPoint(x, y, c - y * y)


def _as_fraction(theta) -> Fraction:
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError(f"threshold must be positive, got {theta}")
    return theta


def ratio_at_least(x: int, k: int, theta=1) -> bool:
    """True iff sqrt(x)/|k| >= theta, decided as q^2 x >= p^2 k^2."""
    if k == 0:
        raise ValueError("ratio undefined for k = 0")
    theta = _as_fraction(theta)
    p, q = theta.numerator, theta.denominator
    return q * q * x >= p * p * k * k


def sqrt_ratio_decimal(num: int, den: int, digits: int = 2) -> str:
    """sqrt(num/den) rounded half-up to `digits` decimals, exactly."""
    if num < 0 or den <= 0:
        raise ValueError("need num >= 0 and den > 0")
    # floor(sqrt(floor(v))) == floor(sqrt(v)), so this is the exact floor
    q = math.isqrt(num * 10 ** (2 * digits + 2) // den)
    units, tail = divmod(q, 10)
    if tail >= 5:
        units += 1
    whole, frac = divmod(units, 10 ** digits)
    if digits == 0:
        return str(whole)
    return f"{whole}.{frac:0{digits}d}"


def ratio_decimal(x: int, k: int, digits: int = 2) -> str:
    """sqrt(x)/|k| rounded half-up to `digits` decimals."""
    if k == 0:
        raise ValueError("ratio undefined for k = 0")
    return sqrt_ratio_decimal(x, k * k, digits)


def ratio_float(x: int, k: int) -> float:
    """|k|/sqrt(x), the inverse ratio used by the distribution statistics."""
    return abs(k) / math.sqrt(x)
