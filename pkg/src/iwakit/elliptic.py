"""Weierstrass models over Q: invariants, minimal models, reduction data, twists.

Local reduction data (Kodaira symbol, Tamagawa number, conductor exponent) is
computed by Tate's algorithm in full generality, including the residue
characteristics 2 and 3.  Minimality uses Laska-Kraus-Connell reduction, so
every quantity attached to "the" curve refers to the global minimal model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ntheory import (
    inv_mod,
    iroot,
    is_prime,
    is_squarefree,
    factorize,
    legendre,
    padic_valuation,
)

__all__ = [
    "WeierstrassModel",
    "CurveInvariants",
    "LocalReductionData",
    "SingularCurveError",
    "NonMinimalModelError",
    "InvalidTwistError",
    "BadReductionError",
    "invariants",
    "minimal_model",
    "is_minimal_at",
    "reduction_type",
    "quadratic_twist",
    "model_from_c4c6",
    "conductor",
    "has_potential_good_reduction",
    "parse_model",
    "format_model",
]


class SingularCurveError(ValueError):
    """The Weierstrass equation has discriminant zero."""


class NonMinimalModelError(ValueError):
    """Local data was requested at a prime where the model is not minimal."""


class InvalidTwistError(ValueError):
    """Twist parameter must be a squarefree nonzero integer."""


class BadReductionError(ValueError):
    """Point counts require good reduction at the given prime."""


@dataclass(frozen=True)
class WeierstrassModel:
    """Integral model y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self) -> None:
        if self.disc == 0:
            raise SingularCurveError(f"discriminant vanishes for {self.coefficients()}")

    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> int:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.coefficients()
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> int:
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self) -> int:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def transform(self, r: int = 0, s: int = 0, t: int = 0, u: int = 1) -> "WeierstrassModel":
        """Change of coordinates x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.

        u > 1 requires the resulting coefficients to stay integral.
        """
        if u < 1:
            raise ValueError(f"scaling factor must be a positive integer, got {u}")
        a1, a2, a3, a4, a6 = self.coefficients()
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        if u != 1:
            coeffs = []
            for k, v in ((1, n1), (2, n2), (3, n3), (4, n4), (6, n6)):
                q, rem = divmod(v, u**k)
                if rem:
                    raise ValueError(f"scaling by u={u} does not keep the model integral")
                coeffs.append(q)
            n1, n2, n3, n4, n6 = coeffs
        return WeierstrassModel(n1, n2, n3, n4, n6)


@dataclass(frozen=True)
class CurveInvariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j: Fraction

    def __post_init__(self) -> None:
        if self.disc == 0:
            raise SingularCurveError("discriminant vanishes")
        assert 4 * self.b8 == self.b2 * self.b6 - self.b4 * self.b4
        assert self.b2 * self.b2 - 24 * self.b4 == self.c4
        assert self.c4**3 - self.c6**2 == 1728 * self.disc
        assert self.j == Fraction(self.c4**3, self.disc)


def invariants(model: WeierstrassModel) -> CurveInvariants:
    """All b/c invariants, the discriminant and the exact j-invariant."""
    disc = model.disc
    return CurveInvariants(
        b2=model.b2,
        b4=model.b4,
        b6=model.b6,
        b8=model.b8,
        c4=model.c4,
        c6=model.c6,
        disc=disc,
        j=Fraction(model.c4**3, disc),
    )


def parse_model(text: str) -> WeierstrassModel:
    """Parse the curve format "a1,a2,a3,a4,a6"."""
    parts = text.split(",")
    if len(parts) != 5:
        raise ValueError(f"expected five comma-separated integers, got {text!r}")
    try:
        a = [int(p.strip()) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad curve coefficient in {text!r}") from exc
    return WeierstrassModel(*a)


def format_model(model: WeierstrassModel) -> str:
    return ",".join(str(c) for c in model.coefficients())


# ---------------------------------------------------------------------------
# minimal models (Laska-Kraus-Connell)
# ---------------------------------------------------------------------------


def _kraus_ok(c4: int, c6: int, q: int) -> bool:
    """Whether an integral model with invariants (c4, c6) exists locally at q.

    Only q = 2 and q = 3 impose conditions.
    """
    if q == 3:
        return c6 == 0 or padic_valuation(c6, 3) != 2
    if q == 2:
        if c6 % 4 == 3:
            return True
        v4 = padic_valuation(c4, 2) if c4 else 10**9
        return v4 >= 4 and c6 % 32 in (0, 8)
    return True


def model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """The canonical integral model with the given invariants.

    Raises ValueError when no integral model has them (Kraus obstruction
    at 2 or 3, or a divisibility failure).
    """
    num, rem = divmod(c4**3 - c6**2, 1728)
    if rem:
        raise ValueError("c4^3 - c6^2 must be divisible by 1728")
    if num == 0:
        raise SingularCurveError("invariants give discriminant zero")
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    num4, rem4 = divmod(b2 * b2 - c4, 24)
    if rem4:
        raise ValueError("no integral model with these invariants")
    b4 = num4
    num6, rem6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if rem6:
        raise ValueError("no integral model with these invariants")
    b6 = num6
    a1 = b2 % 2
    a3 = b6 % 2
    if (b2 - a1) % 4 or (b4 - a1 * a3) % 2 or (b6 - a3) % 4:
        raise ValueError("no integral model with these invariants")
    model = WeierstrassModel(
        a1, (b2 - a1) // 4, a3, (b4 - a1 * a3) // 2, (b6 - a3) // 4
    )
    assert model.c4 == c4 and model.c6 == c6
    return model


def _minimality_exponent(c4: int, c6: int, disc: int, q: int) -> int:
    """Largest e such that (c4/q^4e, c6/q^6e) still belongs to an integral model."""
    e = padic_valuation(disc, q) // 12
    if c4 != 0:
        e = min(e, padic_valuation(c4, q) // 4)
    if c6 != 0:
        e = min(e, padic_valuation(c6, q) // 6)
    if q in (2, 3):
        while e > 0 and not _kraus_ok(c4 // q ** (4 * e), c6 // q ** (6 * e), q):
            e -= 1
    return e


def minimal_model(model: WeierstrassModel) -> tuple[WeierstrassModel, int]:
    """Global minimal model and the scaling u with c4 = u^4 c4', c6 = u^6 c6'."""
    c4, c6, disc = model.c4, model.c6, model.disc
    u = 1
    # only primes q with q^12 | disc can be removed
    bound = iroot(abs(disc), 12)
    q = 2
    while q <= bound:
        if disc % q == 0 and is_prime(q):
            u *= q ** _minimality_exponent(c4, c6, disc, q)
        q += 1
    return model_from_c4c6(c4 // u**4, c6 // u**6), u


def is_minimal_at(model: WeierstrassModel, q: int) -> bool:
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    return _minimality_exponent(model.c4, model.c6, model.disc, q) == 0


def conductor(model: WeierstrassModel) -> int:
    """Product of q^f_q over the bad primes of the minimal model."""
    mm, _ = minimal_model(model)
    n = 1
    for q, _ in factorize(mm.disc):
        n *= q ** reduction_type(mm, q).conductor_exponent
    return n


def has_potential_good_reduction(model: WeierstrassModel, q: int) -> bool:
    """True when j is q-integral."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    j = invariants(model).j
    return j.denominator % q != 0


# ---------------------------------------------------------------------------
# quadratic twists
# ---------------------------------------------------------------------------


def quadratic_twist(model: WeierstrassModel, d: int) -> WeierstrassModel:
    """Integral model of the twist by d, with invariants (d^2 c4, d^3 c6)
    whenever that pair admits an integral model, otherwise the smallest
    rescaling by u in {2, 3, 6} that does.  Compose with minimal_model for
    the minimal twist."""
    if d == 0 or not is_squarefree(d):
        raise InvalidTwistError(f"twist parameter must be squarefree and nonzero, got {d}")
    tc4, tc6 = d * d * model.c4, d**3 * model.c6
    for u in (1, 2, 3, 6):
        uc4, uc6 = u**4 * tc4, u**6 * tc6
        if _kraus_ok(uc4, uc6, 2) and _kraus_ok(uc4, uc6, 3):
            return model_from_c4c6(uc4, uc6)
    raise AssertionError("u = 6 rescaling is always admissible")


# ---------------------------------------------------------------------------
# polynomial helpers over F_q (dense, low degree)
# ---------------------------------------------------------------------------


def _ptrim(p: list[int], q: int) -> list[int]:
    p = [c % q for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmod(a: list[int], b: list[int], q: int) -> list[int]:
    a = list(a)
    lead = inv_mod(b[-1], q)
    while len(a) >= len(b):
        if a[-1] % q == 0:
            a.pop()
            continue
        f = a[-1] * lead % q
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % q
        a.pop()
    return _ptrim(a, q)


def _pmulmod(a: list[int], b: list[int], mod: list[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return _pmod(out, mod, q)


def _pgcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = _ptrim(a, q), _ptrim(b, q)
    while b:
        a, b = b, _pmod(a, b, q)
    if a:
        lead = inv_mod(a[-1], q)
        a = [c * lead % q for c in a]
    return a


def _frobenius_power(mod: list[int], q: int) -> list[int]:
    """X^q mod the given polynomial, by square-and-multiply."""
    result = [1]
    base = [0, 1]
    e = q
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, q)
        base = _pmulmod(base, base, mod, q)
        e >>= 1
    return result


_ENUM_CUTOFF = 1000


def _cubic_structure(c2: int, c1: int, c0: int, q: int) -> tuple[int, int | None, int]:
    """Root structure of T^3 + c2 T^2 + c1 T + c0 over F_q.

    Returns (number of distinct roots in F_q, a most-repeated root or None,
    its multiplicity).
    """

    def value(t: int) -> int:
        return (((t + c2) * t + c1) * t + c0) % q

    if q <= _ENUM_CUTOFF:
        roots = [t for t in range(q) if value(t) == 0]
        if len(roots) == 3 or not roots:
            return (len(roots), None, 1)

        def quotient_at(r: int) -> tuple[int, int]:
            # synthetic division by (T - r): T^2 + d1 T + d0
            d1 = (c2 + r) % q
            d0 = (c1 + r * d1) % q
            return d1, d0

        if len(roots) == 2:
            for r in roots:
                d1, d0 = quotient_at(r)
                if (r * r + d1 * r + d0) % q == 0:
                    return (2, r, 2)
            raise AssertionError("two roots but no double root")
        r = roots[0]
        d1, d0 = quotient_at(r)
        if (r * r + d1 * r + d0) % q == 0:
            return (1, r, 3)
        return (1, None, 1)

    # q beyond enumeration is coprime to 6, so gcd with the derivative works
    poly = [c0 % q, c1 % q, c2 % q, 1]
    deriv = [c1 % q, 2 * c2 % q, 3]
    rep = _pgcd(poly, deriv, q)
    if len(rep) == 1:
        frob = _frobenius_power(poly, q)
        frob = _ptrim([frob[0], (frob[1] if len(frob) > 1 else 0) - 1] + frob[2:], q)
        g = _pgcd(poly, frob, q) if frob else poly
        return (len(g) - 1, None, 1)
    if len(rep) == 2:
        return (2, (-rep[0]) % q, 2)
    return (1, (-rep[1]) * inv_mod(2, q) % q, 3)


def _quad_split(a: int, b: int, c: int, q: int) -> tuple[str, int | None]:
    """Root structure of a Y^2 + b Y + c over F_q with a invertible.

    Returns ("double", root), ("split", None) or ("nonsplit", None).
    """
    if q == 2:
        assert a % 2 == 1
        if b % 2 == 0:
            return ("double", c % 2)
        return ("split", None) if c % 2 == 0 else ("nonsplit", None)
    disc = (b * b - 4 * a * c) % q
    if disc == 0:
        return ("double", (-b) * inv_mod(2 * a, q) % q)
    return ("split", None) if legendre(disc, q) == 1 else ("nonsplit", None)


# ---------------------------------------------------------------------------
# Tate's algorithm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalReductionData:
    """Reduction data of the minimal model at one prime.

    v_c4 is None when c4 = 0 (infinite valuation).
    """

    ell: int
    type: str
    kodaira: str
    tamagawa: int
    conductor_exponent: int
    v_disc: int
    v_c4: int | None

    def __post_init__(self) -> None:
        kinds = {"good", "split_multiplicative", "nonsplit_multiplicative", "additive"}
        if self.type not in kinds:
            raise ValueError(f"unknown reduction type {self.type!r}")
        if (self.type == "good") != (self.v_disc == 0):
            raise ValueError("good reduction iff v_disc = 0")
        if (self.type == "good") != (self.kodaira == "I0"):
            raise ValueError("good reduction iff Kodaira symbol I0")
        if self.is_multiplicative != (self.v_disc > 0 and self.v_c4 == 0):
            raise ValueError("multiplicative iff v_disc > 0 and v_c4 = 0")
        if self.type == "split_multiplicative" and self.tamagawa != self.v_disc:
            raise ValueError("split multiplicative Tamagawa number must equal v_disc")
        if self.type == "nonsplit_multiplicative" and self.tamagawa != math.gcd(2, self.v_disc):
            raise ValueError("nonsplit multiplicative Tamagawa number must be gcd(2, v_disc)")
        if self.type == "additive" and self.tamagawa not in (1, 2, 3, 4):
            raise ValueError("additive Tamagawa number must lie in 1..4")

    @property
    def is_good(self) -> bool:
        return self.type == "good"

    @property
    def is_multiplicative(self) -> bool:
        return self.type in ("split_multiplicative", "nonsplit_multiplicative")

    @property
    def is_additive(self) -> bool:
        return self.type == "additive"


def _singular_point(model: WeierstrassModel, q: int) -> tuple[int, int]:
    """The singular point of the reduction mod q, as residues."""
    a1, a2, a3, a4, a6 = model.coefficients()
    if q <= 3:
        for x in range(q):
            for y in range(q):
                on = (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % q
                fx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % q
                fy = (2 * y + a1 * x + a3) % q
                if on == 0 and fx == 0 and fy == 0:
                    return (x, y)
        raise AssertionError("bad reduction with no singular point")
    # q >= 5: complete the square; the singular x is the repeated root of
    # g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6
    g = [model.b6 % q, 2 * model.b4 % q, model.b2 % q, 4 % q]
    dg = [2 * model.b4 % q, 2 * model.b2 % q, 12 % q]
    rep = _pgcd(g, dg, q)
    if len(rep) == 2:
        x0 = (-rep[0]) % q
    elif len(rep) == 3:
        x0 = (-rep[1]) * inv_mod(2, q) % q
    else:
        raise AssertionError("no repeated root at a bad prime")
    y0 = -(a1 * x0 + a3) * inv_mod(2, q) % q
    return (x0, y0)


def _prepare_step6(model: WeierstrassModel, q: int, v_disc: int) -> WeierstrassModel:
    """Translate so that q | a1, a2; q^2 | a3, a4; q^3 | a6.

    Assumes the singular point sits at the origin and Kodaira types up to IV
    are already excluded.
    """
    if q >= 5:
        half = inv_mod(2, q ** (v_disc + 8))
        model = model.transform(s=(-model.a1 * half) % q ** (v_disc + 8))
        model = model.transform(t=(-model.a3 * half) % q ** (v_disc + 8))
    else:
        for s in range(q):
            cand = model.transform(s=s)
            if cand.a1 % q == 0 and cand.a2 % q == 0:
                model = cand
                break
        else:
            raise AssertionError("no s-translation fixes a1, a2")
        for t in range(q**3):
            cand = model.transform(t=t)
            if cand.a3 % q**2 == 0 and cand.a6 % q**3 == 0:
                model = cand
                break
        else:
            raise AssertionError("no t-translation fixes a3, a6")
    assert model.a1 % q == 0 and model.a2 % q == 0
    assert model.a3 % q**2 == 0 and model.a4 % q**2 == 0 and model.a6 % q**3 == 0
    return model


def reduction_type(model: WeierstrassModel, ell: int) -> LocalReductionData:
    """Tate's algorithm at ell.  The model must be minimal at ell."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if not is_minimal_at(model, ell):
        raise NonMinimalModelError(f"model is not minimal at {ell}")
    q = ell
    c4, c6, disc = model.c4, model.c6, model.disc
    v_disc = padic_valuation(disc, q) if disc % q == 0 else 0
    v_c4 = None if c4 == 0 else padic_valuation(c4, q) if c4 % q == 0 else 0

    def data(kind: str, kodaira: str, tamagawa: int, f: int) -> LocalReductionData:
        return LocalReductionData(
            ell=q, type=kind, kodaira=kodaira, tamagawa=tamagawa,
            conductor_exponent=f, v_disc=v_disc, v_c4=v_c4,
        )

    if v_disc == 0:
        return data("good", "I0", 1, 0)

    if v_c4 == 0:
        n = v_disc
        if q == 2:
            x0, y0 = _singular_point(model, 2)
            shifted = model.transform(r=x0, t=y0)
            split = shifted.a2 % 2 == 0
        else:
            split = legendre(-c6, q) == 1
        if split:
            return data("split_multiplicative", f"I{n}", n, 1)
        return data("nonsplit_multiplicative", f"I{n}", math.gcd(2, n), 1)

    # additive reduction
    x0, y0 = _singular_point(model, q)
    w = model.transform(r=x0, t=y0)
    assert w.a3 % q == 0 and w.a4 % q == 0 and w.a6 % q == 0

    if w.a6 % q**2:
        return data("additive", "II", 1, v_disc)
    if w.b8 % q**3:
        return data("additive", "III", 2, v_disc - 1)
    if w.b6 % q**3:
        kind, _ = _quad_split(1, w.a3 // q, -(w.a6 // q**2), q)
        assert kind != "double"
        return data("additive", "IV", 3 if kind == "split" else 1, v_disc - 2)

    w = _prepare_step6(w, q, v_disc)
    nroots, root, mult = _cubic_structure(w.a2 // q, w.a4 // q**2, w.a6 // q**3, q)

    if mult == 1:
        return data("additive", "I0*", 1 + nroots, v_disc - 4)

    if mult == 2:
        w = w.transform(r=q * root)
        m, ax, ay = 1, 2, 2
        while True:
            kind, y1 = _quad_split(1, w.a3 // q**ay, -(w.a6 // q ** (ax + ay)), q)
            if kind != "double":
                return data("additive", f"I{m}*", 4 if kind == "split" else 2, v_disc - m - 4)
            w = w.transform(t=q**ay * y1)
            ay += 1
            m += 1
            kind, x1 = _quad_split(w.a2 // q, w.a4 // q ** (ax + 1), w.a6 // q ** (ax + ay), q)
            if kind != "double":
                return data("additive", f"I{m}*", 4 if kind == "split" else 2, v_disc - m - 4)
            w = w.transform(r=q**ax * x1)
            ax += 1
            m += 1

    # triple root
    w = w.transform(r=q * root)
    kind, y1 = _quad_split(1, w.a3 // q**2, -(w.a6 // q**4), q)
    if kind != "double":
        return data("additive", "IV*", 3 if kind == "split" else 1, v_disc - 6)
    w = w.transform(t=q**2 * y1)
    if w.a4 % q**4:
        return data("additive", "III*", 2, v_disc - 7)
    if w.a6 % q**6:
        return data("additive", "II*", 1, v_disc - 8)
    raise NonMinimalModelError(f"model is not minimal at {q}")
