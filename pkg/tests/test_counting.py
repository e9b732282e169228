import math

import pytest
from hypothesis import given, settings, strategies as st

from iwakit.counting import (
    CROSSOVER,
    FrobeniusData,
    TraceCache,
    count_points,
    count_points_bsgs,
    count_points_naive,
    frobenius_data,
    order_over_extension,
    trace_of_frobenius,
)
from iwakit.elliptic import (
    BadReductionError,
    WeierstrassModel,
    model_from_c4c6,
    quadratic_twist,
)

E99 = WeierstrassModel(0, 0, 1, -3, -5)
E32 = WeierstrassModel(0, 0, 0, -1, 0)
E11 = WeierstrassModel(0, -1, 1, -10, -20)


# ---------------------------------------------------------------------------
# independent oracle: enumeration over F_{ell^n} built as F_ell[t]/(f)
# ---------------------------------------------------------------------------


def _pmul(a, b, f, ell):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % ell
    # reduce modulo the monic f
    n = len(f) - 1
    for i in range(len(out) - 1, n - 1, -1):
        c = out[i]
        if c:
            for k in range(n):
                out[i - n + k] = (out[i - n + k] - c * f[k]) % ell
            out[i] = 0
    out = out[:n]
    while len(out) < n:
        out.append(0)
    return tuple(out)


def _ppow(a, e, f, ell):
    n = len(f) - 1
    result = tuple([1] + [0] * (n - 1))
    base = tuple(a)
    while e:
        if e & 1:
            result = _pmul(result, base, f, ell)
        base = _pmul(base, base, f, ell)
        e >>= 1
    return result


def _poly_gcd(a, b, ell):
    a, b = list(a), list(b)

    def trim(p):
        while p and p[-1] % ell == 0:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, ell)
        r = a
        while True:
            r = trim(r)
            if len(r) < len(b):
                break
            c = r[-1] * inv % ell
            shift = len(r) - len(b)
            for i, bc in enumerate(b):
                r[shift + i] = (r[shift + i] - c * bc) % ell
        a, b = b, r
    return trim(a)


def _is_irreducible(f, ell):
    # Rabin: X^(ell^n) = X mod f, and gcd(X^(ell^(n/d)) - X, f) = 1 for each
    # prime d | n.  The gcd step matters: a product of factors with mixed
    # degrees all dividing n passes the weaker fixed-point check alone.
    n = len(f) - 1
    if n == 1:
        return True
    x = tuple(([0, 1] + [0] * n)[:n])
    t = x
    for _ in range(n):
        t = _ppow(t, ell, f, ell)
    if t != x:
        return False
    for d in {p for p, _ in _factor(n)}:
        t = x
        for _ in range(n // d):
            t = _ppow(t, ell, f, ell)
        diff = list(t)
        diff[1] = (diff[1] - 1) % ell
        if len(_poly_gcd(diff, f, ell)) != 1:
            return False
    return True


def _factor(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _find_irreducible(ell, n):
    # iterate constant-first coefficient vectors of monic degree-n polynomials
    for code in range(ell**n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % ell)
            c //= ell
        f = coeffs + [1]
        if f[0] == 0:
            continue
        if _is_irreducible(f, ell):
            return f
    raise AssertionError("no irreducible polynomial found")


class Ext:
    """Tiny F_{ell^n} arithmetic for the enumeration oracle."""

    def __init__(self, ell, n):
        self.ell, self.n = ell, n
        self.f = _find_irreducible(ell, n)
        self.q = ell**n
        self.zero = tuple([0] * n)
        self.one = tuple([1] + [0] * (n - 1))

    def embed(self, c):
        return tuple([c % self.ell] + [0] * (self.n - 1))

    def elements(self):
        for code in range(self.q):
            coeffs = []
            c = code
            for _ in range(self.n):
                coeffs.append(c % self.ell)
                c //= self.ell
            yield tuple(coeffs)

    def add(self, a, b):
        return tuple((x + y) % self.ell for x, y in zip(a, b))

    def mul(self, a, b):
        return _pmul(a, b, self.f, self.ell)

    def pow(self, a, e):
        return _ppow(a, e, self.f, self.ell)

    def inv(self, a):
        assert a != self.zero
        return self.pow(a, self.q - 2)

    def trace_to_f2(self, a):
        # absolute trace for ell = 2
        t = self.zero
        frob = a
        for _ in range(self.n):
            t = self.add(t, frob)
            frob = self.mul(frob, frob)
        assert t in (self.zero, self.one)
        return 0 if t == self.zero else 1


def ext_count(model, ell, n):
    """#E(F_{ell^n}) by per-x solution counting in the extension field."""
    field = Ext(ell, n)
    a1, a2, a3, a4, a6 = (field.embed(c) for c in model.coefficients())
    total = 1
    if ell == 2:
        for x in field.elements():
            x2 = field.mul(x, x)
            rhs = field.add(
                field.add(field.mul(x2, x), field.mul(a2, x2)),
                field.add(field.mul(a4, x), a6),
            )
            h = field.add(field.mul(a1, x), a3)
            if h == field.zero:
                total += 1
            else:
                z = field.mul(rhs, field.inv(field.mul(h, h)))
                if field.trace_to_f2(z) == 0:
                    total += 2
        return total
    b2 = field.embed(model.b2)
    b4 = field.embed(model.b4)
    b6 = field.embed(model.b6)
    four = field.embed(4)
    two = field.embed(2)
    for x in field.elements():
        x2 = field.mul(x, x)
        g = field.add(
            field.add(field.mul(four, field.mul(x2, x)), field.mul(b2, x2)),
            field.add(field.mul(two, field.mul(b4, x)), b6),
        )
        if g == field.zero:
            total += 1
        elif field.pow(g, (field.q - 1) // 2) == field.one:
            total += 2
    return total


def ext_count_direct(model, ell, n):
    """Fully naive double loop, used to validate ext_count itself."""
    field = Ext(ell, n)
    a1, a2, a3, a4, a6 = (field.embed(c) for c in model.coefficients())
    total = 1
    for x in field.elements():
        x2 = field.mul(x, x)
        rhs = field.add(
            field.add(field.mul(x2, x), field.mul(a2, x2)),
            field.add(field.mul(a4, x), a6),
        )
        for y in field.elements():
            lhs = field.add(field.mul(y, y), field.add(field.mul(a1, field.mul(x, y)), field.mul(a3, y)))
            if lhs == rhs:
                total += 1
    return total


def test_oracle_self_consistency():
    for ell, n in [(2, 2), (2, 3), (3, 2), (5, 2)]:
        for w in (E99, E32, WeierstrassModel(1, 0, 0, 0, 1)):
            if w.disc % ell == 0:
                continue
            assert ext_count(w, ell, n) == ext_count_direct(w, ell, n)


# ---------------------------------------------------------------------------
# naive counting
# ---------------------------------------------------------------------------


def test_naive_main_example():
    assert count_points_naive(E99, 7) == 10


def test_naive_small():
    assert count_points_naive(WeierstrassModel(0, 0, 0, 1, 0), 5) == 4


def test_naive_ell2():
    # y^2 + y = x^3: all four affine pairs satisfy or not by hand: (0,0),(0,1) work
    assert count_points_naive(WeierstrassModel(0, 0, 1, 0, 0), 2) == 3


def test_naive_matches_double_loop():
    def brute(w, ell):
        a1, a2, a3, a4, a6 = w.coefficients()
        total = 1
        for x in range(ell):
            for y in range(ell):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % ell == 0:
                    total += 1
        return total

    curves = [E99, E32, WeierstrassModel(1, 1, 0, -2, 3), WeierstrassModel(1, 0, 1, -5, 2)]
    for w in curves:
        for ell in (2, 3, 5, 7, 11, 13, 17, 19, 23):
            if w.disc % ell == 0:
                continue
            assert count_points_naive(w, ell) == brute(w, ell), (w, ell)


def test_naive_bad_reduction():
    with pytest.raises(BadReductionError):
        count_points_naive(E99, 3)
    with pytest.raises(BadReductionError):
        count_points_naive(E99, 11)


def test_count_on_nonminimal_model():
    blown = model_from_c4c6(6**4 * 144, 6**6 * 4104)
    assert count_points(blown, 7) == 10


@given(st.sampled_from([E99, E32, E11]), st.sampled_from([5, 7, 13, 17, 101, 103]))
def test_hasse_bound(w, ell):
    if w.disc % ell == 0:
        return
    n = count_points_naive(w, ell)
    assert abs(ell + 1 - n) <= 2 * math.isqrt(ell) + 1


# ---------------------------------------------------------------------------
# BSGS counting
# ---------------------------------------------------------------------------


def _primes_in(lo, hi):
    from iwakit.ntheory import sieve_primes

    return [q for q in sieve_primes(hi).primes if q > lo]


def test_bsgs_matches_naive():
    curves = [E99, E32, WeierstrassModel(1, 1, 0, -2, 3), WeierstrassModel(1, 0, 1, -5, 2)]
    for w in curves:
        for ell in _primes_in(457, 1200):
            if w.disc % ell == 0:
                continue
            assert count_points_bsgs(w, ell) == count_points_naive(w, ell), (w, ell)


def test_bsgs_large_twist_consistency():
    ell = 99991
    n = count_points_bsgs(E99, ell)
    assert abs(ell + 1 - n) <= 2 * math.isqrt(ell) + 1
    tw = quadratic_twist(E99, 5)  # 5 is a nonresidue mod 99991 iff legendre says so; any d works:
    # the twist by a nonresidue has count 2(ell+1) - n; by a residue, the same count
    from iwakit.ntheory import legendre

    m = count_points_bsgs(tw, ell)
    if legendre(5, ell) == -1:
        assert n + m == 2 * (ell + 1)
    else:
        assert n == m


def test_bsgs_supersingular():
    w = WeierstrassModel(0, 0, 0, 0, 1)  # y^2 = x^3 + 1
    for ell in (5, 11, 17):
        assert count_points_naive(w, ell) == ell + 1
    for ell in (461, 1019):
        assert ell % 3 == 2
        assert count_points_bsgs(w, ell) == ell + 1


def test_bsgs_rejects_tiny():
    with pytest.raises(ValueError):
        count_points_bsgs(E99, 3)
    with pytest.raises(ValueError):
        count_points_bsgs(E99, 10)  # not prime


def test_dispatcher_crossover():
    assert count_points(E99, 461) == count_points_naive(E99, 461)
    assert count_points(E99, 461, crossover=100) == count_points_naive(E99, 461)


# ---------------------------------------------------------------------------
# Frobenius data and extensions
# ---------------------------------------------------------------------------


def test_frobenius_data_main_example():
    fd = frobenius_data(E99, 7)
    assert fd.a_ell == -2
    assert fd.counts[1] == 10
    assert order_over_extension(fd, 1) == 10
    assert order_over_extension(fd, 2) == 60


def test_order_over_extension_formula():
    fd = FrobeniusData(ell=7, a_ell=-2)
    assert order_over_extension(fd, 2) == 7**2 + 1 - ((-2) ** 2 - 2 * 7)
    with pytest.raises(ValueError):
        order_over_extension(fd, 0)


def test_frobenius_data_validates_hasse():
    with pytest.raises(ValueError):
        FrobeniusData(ell=7, a_ell=8)


def test_extension_counts_against_oracle():
    cases = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4), (5, 2),
             (5, 3), (7, 2), (7, 3), (11, 2), (13, 2), (47, 2)]
    curves = [E99, E32, WeierstrassModel(1, 0, 0, 0, 1), WeierstrassModel(0, 0, 0, 0, 1)]
    for w in curves:
        for ell, n in cases:
            if w.disc % ell == 0:
                continue
            fd = frobenius_data(w, ell)
            assert order_over_extension(fd, n) == ext_count(w, ell, n), (w, ell, n)


# ---------------------------------------------------------------------------
# trace cache
# ---------------------------------------------------------------------------


def test_trace_cache_roundtrip(tmp_path):
    cache = TraceCache(tmp_path)
    got = cache.traces(E99, [2, 5, 7, 13, 463])
    assert got[7] == -2
    files = list(tmp_path.glob("*.traces"))
    assert len(files) == 1
    text = files[0].read_text()
    assert text == "".join(f"{ell} {got[ell]}\n" for ell in sorted(got))

    fresh = TraceCache(tmp_path)
    again = fresh.traces(E99, [2, 5, 7, 13, 463])
    assert again == got
    assert files[0].read_text() == text  # bit-identical after a pure hit


def test_trace_cache_isomorphic_models_share_key(tmp_path):
    cache = TraceCache(tmp_path)
    cache.traces(E99, [7])
    cache.traces(E99.transform(r=3, s=-2, t=5), [7, 13])
    assert len(list(tmp_path.glob("*.traces"))) == 1


def test_trace_cache_memory_only():
    cache = TraceCache(None)
    assert cache.trace(E99, 7) == -2


def test_trace_cache_parallel(tmp_path):
    cache = TraceCache(tmp_path)
    got = cache.traces(E99, [5, 7, 13, 17], jobs=2)
    assert got[7] == -2
    assert set(got) == {5, 7, 13, 17}


def test_trace_cache_bad_prime():
    cache = TraceCache(None)
    with pytest.raises(BadReductionError):
        cache.trace(E99, 11)


def test_trace_matches_count():
    for ell in (5, 7, 13, 467):
        assert trace_of_frobenius(E99, ell) == ell + 1 - count_points(E99, ell)
