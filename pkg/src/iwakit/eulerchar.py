"""Euler-characteristic factor data for curves additive at p.

The pipeline twists by the quadratic field of discriminant (-1)^((p-1)/2) p,
demands good ordinary reduction of the twist, and assembles the local
factors whose p-divisibility decides whether both Iwasawa invariants vanish.
The local-points factor is never computed directly: only its p-divisibility
is consumed, and Lagrange gives that from the residue count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .counting import trace_of_frobenius
from .elliptic import (
    WeierstrassModel,
    has_potential_good_reduction,
    minimal_model,
    quadratic_twist,
    reduction_type,
)
from .ntheory import factorize, is_prime, sieve_primes
from .refdata import reference_record

__all__ = [
    "OrdinaryTwist",
    "EulerFactors",
    "TwistNotGoodError",
    "SupersingularTwistError",
    "HypothesisNotMetError",
    "good_ordinary_twist",
    "euler_char_factors",
    "euler_factors_record",
    "mu_lambda_vanish",
    "division_polynomial",
    "has_rational_p_torsion",
    "tamagawa_product_away_from",
]


class TwistNotGoodError(ValueError):
    """The canonical quadratic twist fails to have good reduction at p."""


class SupersingularTwistError(ValueError):
    """The twist is good at p but supersingular, outside this pipeline."""


class HypothesisNotMetError(ValueError):
    """A stated hypothesis of the Euler-characteristic criterion fails."""


@dataclass(frozen=True)
class OrdinaryTwist:
    p: int
    d: int
    model: WeierstrassModel
    a_p: int

    def __post_init__(self) -> None:
        if self.a_p % self.p == 0:
            raise ValueError("ordinary twist requires a_p prime to p")

    @property
    def residue_count(self) -> int:
        """#F(F_p) for the reduction F of the twisted model."""
        return self.p + 1 - self.a_p


@dataclass(frozen=True)
class EulerFactors:
    p: int
    sha_p_order: int | None
    frak_F_count: int
    pi_image_status: str
    tamagawa_product: int
    ordinary: bool
    analytic_rank_zero: bool
    torsion_free_at_p: bool

    def __post_init__(self) -> None:
        p = self.p
        if p == 2 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if abs(p + 1 - self.frak_F_count) ** 2 > 4 * p:
            raise ValueError(f"residue count {self.frak_F_count} violates the Hasse bound at {p}")
        if self.pi_image_status not in ("prime_to_p_implied", "unknown"):
            raise ValueError(f"unknown pi status {self.pi_image_status!r}")
        if self.pi_image_status == "prime_to_p_implied" and self.frak_F_count % p == 0:
            raise ValueError("Lagrange implication requires the residue count prime to p")
        if self.tamagawa_product < 1:
            raise ValueError("Tamagawa product is a positive integer")
        if self.sha_p_order is not None and not _is_p_power(self.sha_p_order, p):
            raise ValueError(f"sha order must be a power of {p}, got {self.sha_p_order}")


def _is_p_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def good_ordinary_twist(model: WeierstrassModel, p: int) -> OrdinaryTwist:
    """Twist by the discriminant of the degree-2 field inside the p-th
    cyclotomic field; the result must be good ordinary at p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    minimal, _ = minimal_model(model)
    red = reduction_type(minimal, p)
    if not red.is_additive:
        raise ValueError(
            f"reduction at {p} is {red.type}; the twist pipeline starts from additive reduction"
        )
    if not has_potential_good_reduction(minimal, p):
        raise ValueError(f"potentially multiplicative at {p}: no good twist exists")
    d = p if p % 4 == 1 else -p
    twisted, _ = minimal_model(quadratic_twist(minimal, d))
    if not reduction_type(twisted, p).is_good:
        raise TwistNotGoodError(
            f"twist by {d} is not good at {p}; the quadratic-subfield assumption fails"
        )
    a_p = trace_of_frobenius(twisted, p)
    if a_p % p == 0:
        raise SupersingularTwistError(f"twist by {d} is supersingular at {p} (a_p = {a_p})")
    return OrdinaryTwist(p=p, d=d, model=twisted, a_p=a_p)


# ---------------------------------------------------------------------------
# division polynomials and rational p-torsion
# ---------------------------------------------------------------------------


def _pol_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _pol_neg(a: list[int]) -> list[int]:
    return [-x for x in a]


def _pol_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def division_polynomial(model: WeierstrassModel, n: int) -> list[int]:
    """Coefficients (low to high) of the n-th division polynomial in x, n odd.

    Roots over any field are the x-coordinates of the nonzero points killed
    by n.  Even n would need the two-variable factor and is not provided.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"only odd n >= 1 is supported, got {n}")
    b2, b4, b6, b8 = model.b2, model.b4, model.b6, model.b8
    quartic = [b6, 2 * b4, b2, 4]  # the square of the two-variable factor

    def _sq(t: tuple[int, ...]) -> list[int]:
        return _pol_mul(list(t), list(t))

    def _cube(t: tuple[int, ...]) -> list[int]:
        return _pol_mul(_pol_mul(list(t), list(t)), list(t))

    # psi_n = f(n) for odd n, psi_n = psi_2 * g(n) for even n
    @lru_cache(maxsize=None)
    def f(k: int) -> tuple[int, ...]:
        if k == -1:
            return (-1,)
        if k == 1:
            return (1,)
        if k == 3:
            return (b8, 3 * b6, 3 * b4, b2, 3)
        assert k >= 5 and k % 2 == 1
        m = (k - 1) // 2
        if m % 2 == 0:
            lead = _pol_mul(_pol_mul(quartic, quartic), _pol_mul(list(g(m + 2)), _cube(g(m))))
            tail = _pol_mul(list(f(m - 1)), _cube(f(m + 1)))
        else:
            lead = _pol_mul(list(f(m + 2)), _cube(f(m)))
            tail = _pol_mul(_pol_mul(quartic, quartic), _pol_mul(list(g(m - 1)), _cube(g(m + 1))))
        return tuple(_pol_add(lead, _pol_neg(tail)))

    @lru_cache(maxsize=None)
    def g(k: int) -> tuple[int, ...]:
        if k == 0:
            return (0,)
        if k == 2:
            return (1,)
        if k == 4:
            return (
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                10 * b8,
                10 * b6,
                5 * b4,
                b2,
                2,
            )
        assert k >= 6 and k % 2 == 0
        m = k // 2
        if m % 2 == 0:
            inner = _pol_add(
                _pol_mul(list(g(m + 2)), _sq(f(m - 1))),
                _pol_neg(_pol_mul(list(g(m - 2)), _sq(f(m + 1)))),
            )
            return tuple(_pol_mul(list(g(m)), inner))
        inner = _pol_add(
            _pol_mul(list(f(m + 2)), _sq(g(m - 1))),
            _pol_neg(_pol_mul(list(f(m - 2)), _sq(g(m + 1)))),
        )
        return tuple(_pol_mul(list(f(m)), inner))

    return list(f(n))


def _integer_roots(coeffs: list[int]) -> list[int]:
    """All integer roots of a nonzero integer polynomial."""
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    roots = []
    shift = 0
    while coeffs[0] == 0:
        shift += 1
        coeffs = coeffs[1:]
    if shift:
        roots.append(0)
    c0 = abs(coeffs[0])
    if len(coeffs) == 1:
        return roots
    divisors = {1}
    for q, e in factorize(c0):
        divisors = {d * q**k for d in divisors for k in range(e + 1)}
    for d in sorted(divisors):
        for cand in (d, -d):
            if _pol_eval(coeffs, cand) == 0:
                roots.append(cand)
    return sorted(roots)


def _pol_eval(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def has_rational_p_torsion(model: WeierstrassModel, p: int) -> bool:
    """Whether E(Q) contains a point of order p.

    Fast path: a single good prime ell != p with count prime to p certifies
    absence, since reduction is injective on p-torsion there.  Otherwise the
    p-division polynomial of the integral short model is searched for
    integer roots giving rational points; torsion roots are integral there.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    minimal, _ = minimal_model(model)
    for ell in sieve_primes(1000).primes:
        if ell == p or not reduction_type(minimal, ell).is_good:
            continue
        if (ell + 1 - trace_of_frobenius(minimal, ell)) % p != 0:
            return False
    return _division_poly_torsion(minimal, p)


def _division_poly_torsion(model: WeierstrassModel, p: int) -> bool:
    """Exact decision by integer-root search on the short model."""
    short = WeierstrassModel(0, 0, 0, -27 * model.c4, -54 * model.c6)
    psi = division_polynomial(short, p)
    for x in _integer_roots(psi):
        rhs = (x * x + short.a4) * x + short.a6
        if rhs >= 0 and math.isqrt(rhs) ** 2 == rhs:
            return True
    return False


# ---------------------------------------------------------------------------
# factor assembly and the vanishing criterion
# ---------------------------------------------------------------------------


def tamagawa_product_away_from(model: WeierstrassModel, p: int) -> int:
    """Product of Tamagawa numbers over all bad primes except p."""
    minimal, _ = minimal_model(model)
    prod = 1
    for ell, _ in factorize(abs(minimal.disc)):
        if ell == p:
            continue
        prod *= reduction_type(minimal, ell).tamagawa
    return prod


def euler_char_factors(
    model: WeierstrassModel,
    p: int,
    *,
    sha_order: int | None = None,
    analytic_rank_zero: bool | None = None,
    use_reference: bool = True,
) -> EulerFactors:
    """Assemble the factors of the Euler-characteristic product.

    Analytic inputs default to the bundled reference data unless
    use_reference is off; the analytic rank is required, the sha order may
    stay unknown and propagates as such.
    """
    twist = good_ordinary_twist(model, p)
    minimal, _ = minimal_model(model)
    if use_reference and (sha_order is None or analytic_rank_zero is None):
        rec = reference_record(minimal, p)
        if rec is not None:
            if analytic_rank_zero is None:
                analytic_rank_zero = rec["analytic_rank"] == 0
            if sha_order is None and rec["sha_p_order"] != "unknown":
                sha_order = rec["sha_p_order"]
    if analytic_rank_zero is None:
        raise HypothesisNotMetError(
            "analytic rank is an external input: none supplied and no reference record"
        )
    if not analytic_rank_zero:
        raise HypothesisNotMetError("the criterion requires analytic rank 0")
    if has_rational_p_torsion(minimal, p):
        raise HypothesisNotMetError(f"the criterion requires E(Q)[{p}] = 0")
    count = twist.residue_count
    status = "prime_to_p_implied" if count % p != 0 else "unknown"
    return EulerFactors(
        p=p,
        sha_p_order=sha_order,
        frak_F_count=count,
        pi_image_status=status,
        tamagawa_product=tamagawa_product_away_from(minimal, p),
        ordinary=True,
        analytic_rank_zero=True,
        torsion_free_at_p=True,
    )


def mu_lambda_vanish(ef: EulerFactors) -> str:
    """'zero', 'nonzero', or 'unresolved': whether both invariants vanish.

    A known factor divisible by p settles the question regardless of the
    unknown ones; otherwise any unknown factor leaves it unresolved.
    """
    p = ef.p
    if ef.frak_F_count % p == 0 or ef.tamagawa_product % p == 0:
        return "nonzero"
    if ef.sha_p_order is not None and ef.sha_p_order > 1:
        return "nonzero"
    if ef.sha_p_order is None or ef.pi_image_status == "unknown":
        return "unresolved"
    return "zero"


def euler_factors_record(ef: EulerFactors) -> dict:
    """JSON-ready view of the factors with the vanishing verdict attached."""
    return {
        "p": ef.p,
        "sha_p_order": ef.sha_p_order,
        "frak_F_count": ef.frak_F_count,
        "pi_image_status": ef.pi_image_status,
        "tamagawa_product": ef.tamagawa_product,
        "ordinary": ef.ordinary,
        "analytic_rank_zero": ef.analytic_rank_zero,
        "torsion_free_at_p": ef.torsion_free_at_p,
        "mu_lambda_vanish": mu_lambda_vanish(ef),
    }
