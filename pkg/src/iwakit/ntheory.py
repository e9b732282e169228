"""Prime sieves, modular arithmetic and valuations on plain integers.

Everything here is exact bigint arithmetic; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PrimeSieve",
    "Residue",
    "sieve_primes",
    "is_prime",
    "legendre",
    "padic_valuation",
    "mult_order",
    "inv_mod",
    "sqrt_mod",
    "is_squarefree",
    "factorize",
    "iroot",
    "primitive_root",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2^64."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
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


@dataclass(frozen=True)
class PrimeSieve:
    """All primes up to and including ``bound``, ascending."""

    bound: int
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.bound < 2:
            raise ValueError(f"sieve bound must be >= 2, got {self.bound}")

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, n: int) -> bool:
        if n > self.bound:
            raise ValueError(f"{n} exceeds sieve bound {self.bound}")
        i = _bisect(self.primes, n)
        return i < len(self.primes) and self.primes[i] == n


def _bisect(seq: tuple[int, ...], x: int) -> int:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _sieve_flat(bound: int) -> list[int]:
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for q in range(2, math.isqrt(bound) + 1):
        if flags[q]:
            flags[q * q : bound + 1 : q] = b"\x00" * len(range(q * q, bound + 1, q))
    return [i for i in range(bound + 1) if flags[i]]

def _sieve_segmented(bound: int, segment: int) -> list[int]:
    base = _sieve_flat(math.isqrt(bound))
    primes = list(base)
    lo = math.isqrt(bound) + 1
    while lo <= bound:
        hi = min(lo + segment - 1, bound)
        flags = bytearray([1]) * (hi - lo + 1)
        for q in base:
            start = max(q * q, (lo + q - 1) // q * q)
            if start > hi:
                continue
            flags[start - lo : hi - lo + 1 : q] = b"\x00" * len(range(start, hi + 1, q))
        primes.extend(lo + i for i in range(hi - lo + 1) if flags[i])
        lo = hi + 1
    return primes


def sieve_primes(bound: int, *, segment_limit: int = 10**7) -> PrimeSieve:
    """Primes <= bound.  Switches to a segmented sieve above segment_limit
    so memory stays O(sqrt(bound) + segment)."""
    if bound < 2:
        raise ValueError(f"sieve bound must be >= 2, got {bound}")
    if bound <= segment_limit:
        primes = _sieve_flat(bound)
    else:
        primes = _sieve_segmented(bound, segment=10**6)
    return PrimeSieve(bound=bound, primes=tuple(primes))


def legendre(a: int, ell: int) -> int:
    """Legendre symbol (a/ell) in {-1, 0, 1} by Euler's criterion.

    ell must be an odd prime.
    """
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"legendre modulus must be an odd prime, got {ell}")
    a %= ell
    if a == 0:
        return 0
    r = pow(a, (ell - 1) // 2, ell)
    return 1 if r == 1 else -1


def padic_valuation(n: int, p: int) -> int:
    """Largest v with p^v | n.  n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError(f"valuation base must be >= 2, got {p}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def mult_order(a: int, m: int) -> int:
    """Multiplicative order of a modulo m; requires gcd(a, m) = 1."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    a %= m
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    k, x = 1, a
    while x != 1:
        x = x * a % m
        k += 1
    return k


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks).

    Raises if a is a non-residue.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # p = 1 mod 4: Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization of |n| as [(prime, exponent), ...]."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: list[tuple[int, int]] = []
    for q in (2, 3):
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
    q = 5
    step = 2
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        q += step
        step = 6 - step  # 5, 7, 11, 13, ... wheel
    if n > 1:
        out.append((n, 1))
    return out


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n))


def primitive_root(m: int) -> int:
    """Least generator of (Z/m)* for m an odd prime or odd prime power."""
    facts = factorize(m)
    if len(facts) != 1 or facts[0][0] == 2:
        raise ValueError(f"{m} is not an odd prime power")
    q, k = facts[0]
    phi = q ** (k - 1) * (q - 1)
    checks = [phi // f for f, _ in factorize(phi)]
    for c in range(2, m):
        if c % q == 0:
            continue
        if all(pow(c, e, m) != 1 for e in checks):
            return c
    raise AssertionError(f"no generator below {m}")


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n == 0:
        return 0
    x = int(round(n ** (1.0 / k))) + 1
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class Residue:
    """A canonical residue class value mod modulus."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: "Residue | int") -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other.value
        return other % self.modulus

    def __add__(self, other: "Residue | int") -> "Residue":
        return Residue(self.value + self._coerce(other), self.modulus)

    def __mul__(self, other: "Residue | int") -> "Residue":
        return Residue(self.value * self._coerce(other), self.modulus)

    def __pow__(self, e: int) -> "Residue":
        return Residue(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> "Residue":
        if math.gcd(self.value, self.modulus) != 1:
            raise ValueError(f"{self.value} is not a unit modulo {self.modulus}")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)
