"""Factorization, balanced residues and complete cube-root enumeration."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

TRIAL_LIMIT = 10 ** 6

_primes: list[int] | None = None


def small_primes() -> list[int]:
    """Primes below TRIAL_LIMIT, sieved once on first use."""
    global _primes
    if _primes is None:
        sieve = bytearray([1]) * TRIAL_LIMIT
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(TRIAL_LIMIT - 1) + 1):
            if sieve[p]:
                sieve[p * p::p] = bytes(len(range(p * p, TRIAL_LIMIT, p)))
        _primes = [i for i, flag in enumerate(sieve) if flag]
    return _primes


@dataclass(frozen=True)
class FactoredInteger:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"bad exponent in {self.factors}")
            prod *= p ** e
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    def __pow__(self, k: int) -> "FactoredInteger":
        return FactoredInteger(self.n ** k, tuple((p, e * k) for p, e in self.factors))

    @property
    def prime_powers(self) -> list[int]:
        return [p ** e for p, e in self.factors]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    # Deterministic below 3.3e24 with these bases.
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int) -> int:
    """A nontrivial factor of the composite n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]):
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _rho(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> FactoredInteger:
    """Trial division by the prime table, then rho on whatever is left."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < TRIAL_LIMIT * TRIAL_LIMIT:
            # no prime factor up to sqrt(m) survived trial division
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return FactoredInteger(n, tuple(sorted(found.items())))


def balanced_residue(v: int, m: int) -> int:
    """The representative of v mod m in (-m/2, m/2]."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    r = v % m
    return r - m if 2 * r > m else r


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ValueError(f"{a} is not invertible modulo {m}") from None


def _split_three(n: int) -> tuple[int, int]:
    s = 0
    while n % 3 == 0:
        n //= 3
        s += 1
    return s, n


@lru_cache(maxsize=None)
def _sylow_setup(p: int) -> tuple[int, int, int, int, int]:
    """(s, c, unity, r_exp, order) for p = 1 (mod 3).

    p - 1 = 3^s * t with 3 not dividing t; c generates the 3-Sylow subgroup,
    unity is a primitive cube root of 1, r_exp inverts 3 modulo t.
    """
    s, t = _split_three(p - 1)
    z = 2
    while pow(z, (p - 1) // 3, p) == 1:
        z += 1
    c = pow(z, t, p)
    unity = pow(c, 3 ** (s - 1), p)
    r_exp = pow(3, -1, t) if t > 1 else 0
    return s, c, unity, r_exp, t


def _cbrt_mod_p(m: int, p: int) -> list[int]:
    """All cube roots of the unit m modulo the prime p."""
    m %= p
    if p == 2 or p == 3:
        # cubing is the identity on units mod 2 and mod 3
        return [m]
    if p % 3 == 2:
        return [pow(m, (2 * p - 1) // 3, p)]
    if pow(m, (p - 1) // 3, p) != 1:
        return []
    s, c, unity, r_exp, _ = _sylow_setup(p)
    r = pow(m, r_exp, p)
    # r^3 = m * e with e in the 3-Sylow subgroup; find e = c^L digit by digit
    e = pow(r, 3, p) * pow(m, -1, p) % p
    log = 0
    for i in range(s):
        probe = pow(e * pow(c, -log, p) % p, 3 ** (s - 1 - i), p)
        if probe != 1:
            log += (1 if probe == unity else 2) * 3 ** i
    assert log % 3 == 0
    root = r * pow(c, -(log // 3), p) % p
    return sorted((root, root * unity % p, root * unity * unity % p))


@lru_cache(maxsize=None)
def _unit_cube_exponent(p: int, e: int) -> int:
    q = p ** e
    return pow(3, -1, q - q // p)


def cube_roots_mod_prime_power(m: int, p: int, e: int) -> list[int]:
    """Every r in [0, p^e) with r^3 = m (mod p^e), sorted."""
    if m % p == 0:
        raise ValueError(f"{m} is not a unit modulo {p}")
    q = p ** e
    m %= q
    if p == 2 or p % 3 == 2:
        # gcd(3, phi(p^e)) = 1: cubing permutes the units
        return [pow(m, _unit_cube_exponent(p, e), q)]
    if p == 3:
        roots = [m % 3]
        mod = 3
        for _ in range(1, e):
            nxt = mod * 3
            roots = sorted({r + j * mod for r in roots for j in range(3)
                            if pow(r + j * mod, 3, nxt) == m % nxt})
            mod = nxt
            if not roots:
                return []
        return roots
    roots = _cbrt_mod_p(m, p)
    mod = p
    while mod < q:
        mod = min(mod * mod, q)
        # Newton step; 3r^2 is a unit since p != 3
        roots = [(r - (r ** 3 - m) * pow(3 * r * r, -1, mod)) % mod for r in roots]
    return sorted(roots)


@lru_cache(maxsize=4096)
def _crt_basis(factors: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    n = 1
    for p, e in factors:
        n *= p ** e
    basis = []
    for p, e in factors:
        q = p ** e
        rest = n // q
        basis.append((q, rest * pow(rest, -1, q) % n))
    return tuple(basis)


def cube_roots_mod(m: int, modulus) -> list[int]:
    """All cube roots of m modulo a composite, combined by CRT.

    `modulus` is a FactoredInteger or a plain int (factored on the fly).
    """
    if not isinstance(modulus, FactoredInteger):
        modulus = factorize(modulus)
    n = modulus.n
    if math.gcd(m, n) != 1:
        raise ValueError(f"{m} is not a unit modulo {n}")
    if n == 1:
        return [0]
    per_factor = []
    for p, e in modulus.factors:
        roots = cube_roots_mod_prime_power(m, p, e)
        if not roots:
            return []
        per_factor.append(roots)
    basis = _crt_basis(modulus.factors)
    out = sorted(sum(r * coeff for r, (_, coeff) in zip(combo, basis)) % n
                 for combo in product(*per_factor))
    for r in out:
        assert pow(r, 3, n) == m % n, (r, m, n)
    return out
