"""Candidate generation for one (b, C) cell.

C is carried as the integer C2 = 2C throughout so half-integral C stays exact.
For a cell we solve a^3 = C2 (mod b^2), lift each root to the j = 0 congruence

    2a^3 - 3*alpha*a + C2 = 0 (mod 2b^3),   alpha = a^2 balanced mod b^2,

and pick the lift nearest the vertex target a = 3*alpha^2 / (4*C2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from hallsearch.exact_arith import iroot
from hallsearch.modular import balanced_residue, cube_roots_mod, factorize, mod_inverse


@dataclass(frozen=True)
class SearchCell:
    b: int
    C2: int

    def __post_init__(self):
        if self.b < 2 or self.C2 < 1:
            raise ValueError(f"invalid cell {self}")
        if math.gcd(self.C2, self.b) != 1:
            raise ValueError(f"gcd(C2, b) != 1 for {self}")
        if self.b % 2 == 0 and self.C2 % 2 == 0:
            raise ValueError(f"even b needs odd C2: {self}")

    @property
    def C(self) -> Fraction:
        return Fraction(self.C2, 2)


@dataclass(frozen=True)
class Candidate:
    cell: SearchCell
    a0: int
    alpha: int
    d: int
    k0: int
    n: int
    a: int
    x0: int


def c2_cap(b: int, u) -> int:
    """floor(2 * b^u) for rational u = p/q, computed exactly."""
    u = Fraction(u)
    p, q = u.numerator, u.denominator
    return iroot(2 ** q * b ** p, q)


def admissible_cells(b: int, u=Fraction(1, 3), c2_cap_override: int | None = None) -> list[SearchCell]:
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    cap = c2_cap_override if c2_cap_override is not None else c2_cap(b, u)
    step = 2 if b % 2 == 0 else 1
    return [SearchCell(b, c2) for c2 in range(1, cap + 1, step) if math.gcd(c2, b) == 1]


def solve_a0(cell: SearchCell, b_factored=None) -> list[int]:
    """All a mod b^2 with a^3 = C2."""
    fb = b_factored if b_factored is not None else factorize(cell.b)
    return cube_roots_mod(cell.C2, fb ** 2)


def lift_k0(b: int, a0: int, alpha: int, C2: int) -> tuple[int, int] | None:
    """Solve for k0 in a = a0 + k*b^2; None when the lift does not exist."""
    bb = b * b
    slope = 3 * (2 * a0 * a0 - alpha)
    d = math.gcd(slope, 2 * b)
    N = 2 * a0 ** 3 - 3 * alpha * a0 + C2
    if N % (d * bb):
        return None
    mod = 2 * b // d
    k0 = (-mod_inverse(slope // d, mod) * (N // (d * bb))) % mod
    return d, k0


def round_half_away(q: Fraction) -> int:
    fl = math.floor(abs(q) + Fraction(1, 2))
    return fl if q >= 0 else -fl


def select_n(b: int, C2: int, alpha: int, a0: int, k0: int, d: int) -> int:
    target = Fraction(3 * alpha * alpha, 4 * C2)
    return round_half_away(Fraction(d, 2 * b ** 3) * (target - a0 - k0 * b * b))


def congruence_holds(a: int, b: int, C2: int) -> bool:
    alpha = balanced_residue(a * a, b * b)
    return (2 * a ** 3 - 3 * alpha * a + C2) % (2 * b ** 3) == 0


def build_candidates(cell: SearchCell, n_window: int = 1, b_factored=None,
                     counter=None) -> list[Candidate]:
    """Lifted candidates for every cube root of C2 mod b^2.

    `counter`, if given (a collections.Counter), receives "roots" and
    "lift_failed" tallies.
    """
    b, C2 = cell.b, cell.C2
    bb = b * b
    out = []
    roots = solve_a0(cell, b_factored)
    if counter is not None:
        counter["roots"] += len(roots)
    for a0 in roots:
        alpha = balanced_residue(a0 * a0, bb)
        lift = lift_k0(b, a0, alpha, C2)
        if lift is None:
            if counter is not None:
                counter["lift_failed"] += 1
            continue
        d, k0 = lift
        n = select_n(b, C2, alpha, a0, k0, d)
        step = 2 * b ** 3 // d
        for delta in range(-n_window, n_window + 1):
            a = a0 + k0 * bb + (n + delta) * step
            if a <= b or math.gcd(a, b) != 1:
                continue
            alpha_a = balanced_residue(a * a, bb)
            assert alpha_a == alpha, (cell, a)
            assert (2 * a ** 3 - 3 * alpha_a * a + C2) % (2 * b ** 3) == 0, (cell, a)
            x0, rem = divmod(a * a - alpha_a, bb)
            assert rem == 0
            out.append(Candidate(cell, a0, alpha, d, k0, n + delta, a, x0))
    return out


def k_from_lemma(a: int, b: int, C2: int, i: int) -> int:
    """k(x0 + i) from the closed form in (a, b, C2, i).

    Uses 4 b^6 k = -4 C2 a^3 + 3 D^2 a^2 - 6 C2 D a - C2^2 + 4 D^3 with
    D = b^2 i - alpha. Raises ArithmeticError if the division is not exact,
    which means (a, b, C2, i) does not satisfy the defining congruence.
    """
    alpha = balanced_residue(a * a, b * b)
    D = b * b * i - alpha
    num = -4 * C2 * a ** 3 + 3 * D * D * a * a - 6 * C2 * D * a - C2 * C2 + 4 * D ** 3
    k, rem = divmod(num, 4 * b ** 6)
    if rem:
        raise ArithmeticError(f"(a={a}, b={b}, C2={C2}, i={i}) violates the congruence")
    return k


@dataclass(frozen=True)
class PolynomialP0:
    """P(z) = c3 z^3 + c2 z^2 + c1 z + c0 with z = x - t^2, t = a/b."""
    coeffs: tuple[Fraction, Fraction, Fraction, Fraction]  # (c3, c2, c1, c0)
    vertex_estimate: Fraction
    t: Fraction

    def __call__(self, z) -> Fraction:
        c3, c2, c1, c0 = self.coeffs
        z = Fraction(z)
        return ((c3 * z + c2) * z + c1) * z + c0

    def at_x(self, x: int) -> Fraction:
        return self(x - self.t * self.t)


def polynomial_p0(b: int, C2: int, a: int) -> PolynomialP0:
    t = Fraction(a, b)
    C = Fraction(C2, 2)
    b3 = b ** 3
    coeffs = (
        Fraction(1),
        Fraction(3, 4) * t * t,
        -3 * C * t / b3,
        -2 * C * t ** 3 / b3 - C * C / b3 ** 2,
    )
    alpha = balanced_residue(a * a, b * b)
    vertex = Fraction(3, 4) * t * t * Fraction(alpha, b * b) ** 2 - Fraction(C2, b3) * t ** 3
    return PolynomialP0(coeffs, vertex, t)
