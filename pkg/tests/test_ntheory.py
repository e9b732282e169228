import math

import pytest
from hypothesis import given, settings, strategies as st

from iwakit.ntheory import (
    PrimeSieve,
    Residue,
    factorize,
    inv_mod,
    iroot,
    is_prime,
    is_squarefree,
    legendre,
    mult_order,
    padic_valuation,
    primitive_root,
    sieve_primes,
    sqrt_mod,
)


def oracle_is_prime(n: int) -> bool:
    """Trial division up to sqrt, no shortcuts shared with the sieve."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def test_sieve_small_exact():
    s = sieve_primes(100)
    assert s.primes == tuple(n for n in range(101) if oracle_is_prime(n))


def test_sieve_counts():
    # pi(10^5) cross-checked against the trial-division oracle below;
    # pi(10^6) is the classical count.
    assert len(sieve_primes(10**5)) == 9592
    assert len(sieve_primes(10**6)) == 78498


def test_sieve_oracle_block():
    s = set(sieve_primes(3000).primes)
    for n in range(3001):
        assert (n in s) == oracle_is_prime(n)


def test_segmented_matches_flat():
    flat = sieve_primes(50000)
    seg = sieve_primes(50000, segment_limit=1000)
    assert flat.primes == seg.primes


def test_sieve_bound_validation():
    with pytest.raises(ValueError):
        sieve_primes(1)
    with pytest.raises(ValueError):
        PrimeSieve(bound=0, primes=())


def test_sieve_contains():
    s = sieve_primes(100)
    assert 97 in s
    assert 91 not in s
    with pytest.raises(ValueError):
        101 in s


def test_is_prime_against_oracle():
    for n in range(2000):
        assert is_prime(n) == oracle_is_prime(n), n


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    # Carmichael numbers
    for n in (561, 1105, 41041, 825265):
        assert not is_prime(n)


def test_legendre_against_squares():
    for ell in (3, 5, 7, 11, 13, 101):
        squares = {x * x % ell for x in range(1, ell)}
        for a in range(ell):
            want = 0 if a == 0 else (1 if a in squares else -1)
            assert legendre(a, ell) == want


def test_legendre_rejects_bad_modulus():
    for m in (2, 9, 15, 1):
        with pytest.raises(ValueError):
            legendre(3, m)


def test_padic_valuation():
    assert padic_valuation(48, 2) == 4
    assert padic_valuation(-8019, 3) == 6
    assert padic_valuation(-8019, 11) == 1
    assert padic_valuation(7, 5) == 0
    with pytest.raises(ValueError):
        padic_valuation(0, 3)


def test_mult_order():
    # orders in (Z/7)^*: 3 is a generator
    assert mult_order(3, 7) == 6
    assert mult_order(2, 7) == 3
    assert mult_order(6, 7) == 2
    assert mult_order(1, 7) == 1
    with pytest.raises(ValueError):
        mult_order(6, 9)


@given(st.integers(min_value=2, max_value=500), st.integers(min_value=-10**6, max_value=10**6))
def test_mult_order_divides_group_order(m, a):
    if math.gcd(a % m, m) != 1:
        return
    k = mult_order(a, m)
    assert pow(a, k, m) == 1
    # no smaller exponent works
    for d in range(1, k):
        if k % d == 0:
            assert pow(a, d, m) != 1 or d == k


@given(st.integers(min_value=0, max_value=10**9))
@settings(deadline=None)
def test_sqrt_mod_roundtrip(a):
    for p in (3, 5, 13, 17, 97, 10007):
        if legendre(a, p) == -1:
            with pytest.raises(ValueError):
                sqrt_mod(a, p)
        else:
            r = sqrt_mod(a, p)
            assert r * r % p == a % p


def test_factorize():
    assert factorize(-8019) == [(3, 6), (11, 1)]
    assert factorize(1) == []
    assert factorize(97) == [(97, 1)]
    assert factorize(2**10 * 3**4 * 101) == [(2, 10), (3, 4), (101, 1)]
    with pytest.raises(ValueError):
        factorize(0)


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_reconstructs(n):
    prod = 1
    for q, e in factorize(n):
        assert oracle_is_prime(q)
        prod *= q**e
    assert prod == n


def test_is_squarefree():
    assert is_squarefree(1)
    assert is_squarefree(-15)
    assert not is_squarefree(12)
    assert not is_squarefree(0)


@given(st.integers(min_value=0, max_value=10**12), st.integers(min_value=1, max_value=6))
def test_iroot(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


def test_inv_mod():
    assert inv_mod(3, 7) * 3 % 7 == 1
    with pytest.raises(ValueError):
        inv_mod(6, 9)


def test_primitive_root():
    assert primitive_root(7) == 3
    assert primitive_root(9) == 2
    assert primitive_root(25) == 2
    for m in (3, 5, 7, 11, 13, 9, 27, 25, 49, 121):
        g = primitive_root(m)
        phi = m - m // [q for q, _ in factorize(m)][0]
        assert mult_order(g, m) == phi
        # least such generator
        assert all(mult_order(c, m) < phi for c in range(2, g) if math.gcd(c, m) == 1)
    with pytest.raises(ValueError):
        primitive_root(8)
    with pytest.raises(ValueError):
        primitive_root(15)


def test_residue_arithmetic():
    a = Residue(10, 7)
    assert a.value == 3
    assert (a + 5).value == 1
    assert (a * a).value == 2
    assert (a**3).value == 6
    assert (a.inverse() * a).value == 1
    with pytest.raises(ValueError):
        Residue(2, 6).inverse()
    with pytest.raises(ValueError):
        Residue(1, 1)
    with pytest.raises(ValueError):
        Residue(1, 5) + Residue(1, 7)
