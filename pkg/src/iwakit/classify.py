"""Classification of rational primes relative to a fixed curve and odd prime p.

Primes split three ways: bad reduction (Q1), good reduction with p dividing
the residue point count (Q2), and the rest (Q3).  Q3 primes congruent to
1 mod p form the distinguished set used by the density counts; torsion
growth along the cyclotomic tower is decided at the finite residue level.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .counting import TraceCache, frobenius_data, order_over_extension
from .elliptic import WeierstrassModel, minimal_model, reduction_type
from .ntheory import is_prime, mult_order, padic_valuation, sieve_primes

__all__ = [
    "PrimeClass",
    "CyclotomicSplitting",
    "classify_prime",
    "p2_membership",
    "cyclotomic_split_count",
    "bulk_classify",
    "classification_csv",
]


@dataclass(frozen=True)
class PrimeClass:
    """Verdict for one prime: Q1 bad, Q2 good with p-torsion mod ell, Q3 rest."""

    ell: int
    category: str
    a_ell: int | None
    in_script_q: bool

    def __post_init__(self) -> None:
        if self.category not in ("Q1", "Q2", "Q3"):
            raise ValueError(f"unknown class {self.category!r}")
        if (self.category == "Q1") != (self.a_ell is None):
            raise ValueError("a_ell is recorded exactly for good-reduction primes")
        if self.in_script_q and self.category != "Q3":
            raise ValueError("the distinguished set is contained in Q3")


@dataclass(frozen=True)
class CyclotomicSplitting:
    """ell splits into p^m primes in every deep enough layer of the p-tower."""

    ell: int
    p: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("splitting exponent is nonnegative")
        if self.m != padic_valuation(self.ell ** (self.p - 1) - 1, self.p) - 1:
            raise ValueError("splitting exponent inconsistent with ell and p")


def _check_primes(p: int, ell: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if not is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if ell == p:
        raise ValueError(f"ell = p = {p} is excluded from classification")


def classify_prime(
    model: WeierstrassModel,
    p: int,
    ell: int,
    *,
    cache: TraceCache | None = None,
) -> PrimeClass:
    _check_primes(p, ell)
    minimal, _ = minimal_model(model)
    red = reduction_type(minimal, ell)
    if not red.is_good:
        return PrimeClass(ell=ell, category="Q1", a_ell=None, in_script_q=False)
    if cache is not None:
        a = cache.trace(minimal, ell)
    else:
        a = frobenius_data(minimal, ell).a_ell
    category = "Q2" if (ell + 1 - a) % p == 0 else "Q3"
    return PrimeClass(
        ell=ell,
        category=category,
        a_ell=a,
        in_script_q=category == "Q3" and ell % p == 1,
    )


def p2_membership(model: WeierstrassModel, p: int, ell: int, f: int) -> bool:
    """Whether the reduction over the degree-f residue extension has p-torsion.

    The kernel of reduction at a place over ell is pro-ell, and the orders of
    the Frobenius eigenvalues mod p are prime to p, so torsion growth anywhere
    up the p-tower is already visible at the base residue field F_{ell^f}.
    """
    _check_primes(p, ell)
    if f < 1:
        raise ValueError(f"residue degree must be >= 1, got {f}")
    minimal, _ = minimal_model(model)
    fd = frobenius_data(minimal, ell)
    return order_over_extension(fd, f) % p == 0


def cyclotomic_split_count(ell: int, p: int) -> CyclotomicSplitting:
    _check_primes(p, ell)
    m = padic_valuation(ell ** (p - 1) - 1, p) - 1
    return CyclotomicSplitting(ell=ell, p=p, m=m)


def layer_split_count(ell: int, p: int, n: int) -> int:
    """Number of primes above ell in the degree-p^n layer of the p-tower.

    Computed from the order of ell in (Z/p^{n+1})*: the layer is cut out of
    the p^{n+1}-th cyclotomic field, where Frobenius at ell is ell itself.
    """
    _check_primes(p, ell)
    if n < 0:
        raise ValueError("layer index must be >= 0")
    order = mult_order(ell, p ** (n + 1))
    order_p_part = p ** padic_valuation(order, p) if order % p == 0 else 1
    return p**n // order_p_part


def bulk_classify(
    model: WeierstrassModel,
    p: int,
    bound: int,
    *,
    cache: TraceCache | None = None,
    jobs: int = 1,
) -> list[PrimeClass]:
    """Classify every prime ell <= bound except p, in increasing order."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if bound < 2:
        return []
    minimal, _ = minimal_model(model)
    if cache is None:
        cache = TraceCache(None)
    out: list[PrimeClass] = []
    good: list[int] = []
    for ell in sieve_primes(bound).primes:
        if ell == p:
            continue
        if reduction_type(minimal, ell).is_good:
            good.append(ell)
        else:
            out.append(PrimeClass(ell=ell, category="Q1", a_ell=None, in_script_q=False))
    traces = cache.traces(minimal, good, jobs=jobs)
    for ell in good:
        a = traces[ell]
        category = "Q2" if (ell + 1 - a) % p == 0 else "Q3"
        out.append(PrimeClass(ell=ell, category=category, a_ell=a,
                              in_script_q=category == "Q3" and ell % p == 1))
    out.sort(key=lambda r: r.ell)
    return out


def classification_csv(records: list[PrimeClass]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ell", "class", "a_ell", "in_script_Q"])
    for r in records:
        writer.writerow([
            r.ell,
            r.category,
            "" if r.a_ell is None else r.a_ell,
            "true" if r.in_script_q else "false",
        ])
    return buf.getvalue()
