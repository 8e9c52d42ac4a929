"""Parametric families of small |x^3 - y^2| and the scaling transform."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from hallsearch.exact_arith import HallPoint, hall_k, ratio_at_least

FAMILIES = ("hall", "fermat_pell", "scaled")


@dataclass(frozen=True)
class FamilyMember:
    family: str
    t: int
    point: HallPoint


def _as_int(v: Fraction, what: str) -> int:
    if v.denominator != 1:
        raise ArithmeticError(f"{what} is not integral: {v}")
    return v.numerator


def hall_family(t: int) -> FamilyMember:
    """Hall's degree-10/15 polynomial pair, valid for t = 3 (mod 6)."""
    if t % 6 != 3:
        raise ValueError(f"Hall's family needs t = 3 (mod 6), got {t}")
    T = Fraction(t)
    f = T / 9 * (T ** 9 + 6 * T ** 6 + 15 * T ** 3 + 12)
    g = T ** 15 / 27 + (T ** 12 + 4 * T ** 9 + 8 * T ** 6) / 3 + (5 * T ** 3 + 1) / 2
    k = -(3 * T ** 6 + 14 * T ** 3 + 27) / 108
    x, y, k = _as_int(f, "f(t)"), abs(_as_int(g, "g(t)")), _as_int(k, "k(t)")
    point = HallPoint(x, y, k)  # raises if x^3 - y^2 != k
    return FamilyMember("hall", t, point)


def fermat_pell_x(t: int) -> int:
    return 5 ** 5 * t * t + 3000 * t + 719


def fermat_pell_scan(t_lo: int, t_hi: int, theta=Fraction(1)) -> list[FamilyMember]:
    """Members x = 5^5 t^2 + 3000 t + 719 whose exact k clears theta.

    k comes from direct evaluation; the printed side condition of the family
    is not used.
    """
    out = []
    theta = Fraction(theta)
    p2, q2 = theta.numerator ** 2, theta.denominator ** 2
    isqrt = math.isqrt
    for t in range(t_lo, t_hi + 1):
        x = 3125 * t * t + 3000 * t + 719
        if x < 2:
            continue
        c = x * x * x
        s = isqrt(c)
        k = c - s * s
        if k > s:
            k -= 2 * s + 1
        # k is now x^3 - y^2 for the nearest y
        if k and q2 * x >= p2 * k * k:
            out.append(FamilyMember("fermat_pell", t, hall_k(x)))
    return out


def scale_solution(point: HallPoint, t: int) -> HallPoint:
    """(t^2 x, t^3 y, t^6 k); only equation membership is claimed."""
    if t < 1:
        raise ValueError(f"scale factor must be positive, got {t}")
    return HallPoint(t * t * point.x, t ** 3 * point.y, t ** 6 * point.k)


def as_scaled_member(point: HallPoint, t: int) -> FamilyMember:
    return FamilyMember("scaled", t, scale_solution(point, t))


def passes(member: FamilyMember, theta=Fraction(1)) -> bool:
    return member.point.k != 0 and ratio_at_least(member.point.x, member.point.k, theta)
