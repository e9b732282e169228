"""Degree-p cyclic extensions of Q modeled by ramification characters.

An extension is a tuple of tame primes (each 1 mod p), an optional wild
place at p, and a character exponent per ramified place, normalized so the
first exponent is 1.  Everything downstream (discriminants, Frobenius
orders, counting functions) is computed from this data; defining
polynomials are never constructed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import bulk_classify, cyclotomic_split_count
from .counting import TraceCache
from .elliptic import WeierstrassModel
from .ntheory import iroot, is_prime, primitive_root, sieve_primes

__all__ = [
    "CyclicExtension",
    "SplittingRecord",
    "count_extensions",
    "enumerate_extensions",
    "discriminant",
    "splitting",
    "ramified_splitting",
    "script_q_primes",
    "g_of_X",
    "g_steps",
    "M_of_X",
    "m_steps",
    "extension_record",
]


@dataclass(frozen=True)
class CyclicExtension:
    """Cyclic degree-p field cut out by a product of local characters."""

    p: int
    tame_ramified: tuple[int, ...]
    wild_at_p: bool
    exponents: tuple[int, ...]
    wild_exponent: int | None = None

    def __post_init__(self) -> None:
        p = self.p
        if p == 2 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if not self.tame_ramified and not self.wild_at_p:
            raise ValueError("a nontrivial extension of Q ramifies somewhere")
        if list(self.tame_ramified) != sorted(set(self.tame_ramified)):
            raise ValueError("tame primes must be sorted and distinct")
        for ell in self.tame_ramified:
            if not is_prime(ell) or ell % p != 1:
                raise ValueError(
                    f"no cyclic degree-{p} field is tamely ramified at {ell}: "
                    f"tame primes must be 1 mod {p}"
                )
        if len(self.exponents) != len(self.tame_ramified):
            raise ValueError("one exponent per tame prime")
        if any(not 1 <= e <= p - 1 for e in self.exponents):
            raise ValueError("tame exponents lie in [1, p-1]")
        if self.wild_at_p != (self.wild_exponent is not None):
            raise ValueError("wild exponent present exactly when wild_at_p")
        if self.wild_exponent is not None and not 1 <= self.wild_exponent <= p - 1:
            raise ValueError("wild exponent lies in [1, p-1]")
        vector = self.exponents + ((self.wild_exponent,) if self.wild_at_p else ())
        if vector[0] != 1:
            raise ValueError("characters are normalized to leading exponent 1")

    @property
    def conductor(self) -> int:
        f = 1
        for ell in self.tame_ramified:
            f *= ell
        if self.wild_at_p:
            f *= self.p**2
        return f


@dataclass(frozen=True)
class SplittingRecord:
    """Decomposition of a prime in L/Q and above it in L_cyc."""

    ell: int
    e: int
    f: int
    g: int
    e_cyc: int
    w_count: int

    def __post_init__(self) -> None:
        p = self.e * self.f * self.g
        if not is_prime(p):
            raise ValueError("e*f*g must be the degree p")
        if sorted((self.e, self.f, self.g)) != [1, 1, p]:
            raise ValueError("exactly one of e, f, g equals p")
        if self.e_cyc != self.e:
            raise ValueError("tame ramification is unchanged up the tower")
        if self.w_count < 1:
            raise ValueError("at least one prime lies above ell")


def _check_ram_set(p: int, ram_set) -> tuple[int, ...]:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    primes = sorted(ram_set)
    if len(primes) != len(set(primes)):
        raise ValueError("ramified primes must be distinct")
    for ell in primes:
        if not is_prime(ell) or ell % p != 1:
            raise ValueError(
                f"no cyclic degree-{p} field of Q is tamely ramified exactly at "
                f"a prime not 1 mod {p}: {ell}"
            )
    return tuple(primes)


def count_extensions(p: int, ram_set) -> int:
    """(p-1)^(k-1) fields tamely ramified exactly at the k given primes."""
    primes = _check_ram_set(p, ram_set)
    if not primes:
        return 0
    return (p - 1) ** (len(primes) - 1)


def enumerate_extensions(p: int, ram_set, *, wild_at_p: bool = False) -> list[CyclicExtension]:
    """All normalized characters ramified exactly at ram_set (plus p if wild)."""
    primes = _check_ram_set(p, ram_set)
    if not primes and not wild_at_p:
        return []
    n_slots = len(primes) + (1 if wild_at_p else 0)
    out: list[CyclicExtension] = []

    def rec(vector: tuple[int, ...]) -> None:
        if len(vector) == n_slots:
            if wild_at_p:
                tame, wild = vector[:-1], vector[-1]
            else:
                tame, wild = vector, None
            out.append(CyclicExtension(
                p=p, tame_ramified=primes, wild_at_p=wild_at_p,
                exponents=tame, wild_exponent=wild,
            ))
            return
        choices = (1,) if not vector else tuple(range(1, p))
        for e in choices:
            rec(vector + (e,))

    rec(())
    return out


def discriminant(ext: CyclicExtension) -> int:
    """Conductor-discriminant: the conductor to the power p-1."""
    return ext.conductor ** (ext.p - 1)


def _char_value(ext: CyclicExtension, x: int) -> int:
    """Value in Z/p of the defining character at an integer prime to the conductor."""
    p = ext.p
    total = 0
    for ell, exp in zip(ext.tame_ramified, ext.exponents):
        g = primitive_root(ell)
        # discrete log mod p via the order-p quotient of (Z/ell)*
        z = pow(g, (ell - 1) // p, ell)
        h = pow(x, (ell - 1) // p, ell)
        t = next(t for t in range(p) if pow(z, t, ell) == h)
        total += exp * t
    if ext.wild_at_p:
        p2 = p * p
        g = primitive_root(p2)
        z = pow(g, p - 1, p2)
        h = pow(x, p - 1, p2)
        t = next(t for t in range(p) if pow(z, t, p2) == h)
        total += ext.wild_exponent * t
    return total % p


def _reject_inside_tower(ext: CyclicExtension) -> None:
    if ext.wild_at_p and not ext.tame_ramified:
        raise ValueError(
            "the wild-only field lies inside the cyclotomic tower; "
            "splitting data over it degenerates"
        )


def splitting(ext: CyclicExtension, ell: int) -> SplittingRecord:
    """Decomposition of an unramified prime ell != p."""
    _reject_inside_tower(ext)
    if not is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if ell in ext.tame_ramified or ell == ext.p:
        raise ValueError(f"{ell} is not unramified here; use ramified_splitting")
    p = ext.p
    f = 1 if _char_value(ext, ell) == 0 else p
    m = cyclotomic_split_count(ell, p).m
    return SplittingRecord(ell=ell, e=1, f=f, g=p // f, e_cyc=1, w_count=p ** (m + 1))


def ramified_splitting(ext: CyclicExtension, ell: int) -> SplittingRecord:
    """Decomposition of a tame ramified prime: totally ramified, e = p."""
    _reject_inside_tower(ext)
    if ell not in ext.tame_ramified:
        raise ValueError(f"{ell} is not in the tame ramified set {ext.tame_ramified}")
    p = ext.p
    m = cyclotomic_split_count(ell, p).m
    return SplittingRecord(ell=ell, e=p, f=1, g=1, e_cyc=p, w_count=p**m)


def script_q_primes(
    model: WeierstrassModel,
    p: int,
    bound: int,
    *,
    cache: TraceCache | None = None,
    jobs: int = 1,
) -> list[int]:
    """Good primes = 1 mod p, below the bound, with no p-torsion mod ell."""
    records = bulk_classify(model, p, bound, cache=cache, jobs=jobs)
    return [r.ell for r in records if r.in_script_q]


def _product_weights_dfs(primes: list[int], p: int, bound: int) -> dict[int, int]:
    """Weight (p-1)^(k-1) at each product of k >= 1 distinct listed primes <= bound."""
    weights: dict[int, int] = {}

    def rec(start: int, prod: int, picked: int) -> None:
        for j in range(start, len(primes)):
            nxt = prod * primes[j]
            if nxt > bound:
                break
            weights[nxt] = weights.get(nxt, 0) + (p - 1) ** picked
            rec(j + 1, nxt, picked + 1)

    rec(0, 1, 0)
    return weights


def _product_weights_sieve(primes: list[int], p: int, bound: int) -> dict[int, int]:
    """Same weights via an additive convolution over [1, bound], scaled by p-1."""
    if bound < 1:
        return {}
    c = [0] * (bound + 1)
    c[1] = 1
    for q in primes:
        if q > bound:
            break
        # descending targets so each prime is used at most once per product
        for n in range(bound // q, 0, -1):
            if c[n]:
                c[n * q] += (p - 1) * c[n]
    weights = {}
    for n in range(2, bound + 1):
        if c[n]:
            assert c[n] % (p - 1) == 0
            weights[n] = c[n] // (p - 1)
    return weights


_WEIGHT_METHODS = {"dfs": _product_weights_dfs, "sieve": _product_weights_sieve}


def _product_sum_dfs(primes: list[int], p: int, bound: int) -> int:
    return sum(_product_weights_dfs(primes, p, bound).values())


def _product_sum_sieve(primes: list[int], p: int, bound: int) -> int:
    return sum(_product_weights_sieve(primes, p, bound).values())


def g_of_X(
    model: WeierstrassModel,
    p: int,
    bound: int,
    *,
    cache: TraceCache | None = None,
    jobs: int = 1,
    method: str = "dfs",
) -> int:
    """Count of distinguished-set-ramified fields with squarefree conductor <= bound."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    primes = script_q_primes(model, p, bound, cache=cache, jobs=jobs)
    if method == "dfs":
        return _product_sum_dfs(primes, p, bound)
    if method == "sieve":
        return _product_sum_sieve(primes, p, bound)
    raise ValueError(f"unknown method {method!r}")


def M_of_X(p: int, bound: int, *, method: str = "dfs") -> int:
    """Count of all degree-p cyclic fields with discriminant <= bound."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    max_conductor = iroot(bound, p - 1)
    if max_conductor < 2:
        return 0
    primes = [ell for ell in sieve_primes(max_conductor).primes if ell % p == 1]
    fn = {"dfs": _product_sum_dfs, "sieve": _product_sum_sieve}.get(method)
    if fn is None:
        raise ValueError(f"unknown method {method!r}")
    total = fn(primes, p, max_conductor)
    wild_bound = max_conductor // (p * p)
    if wild_bound >= 1:
        # conductor p^2 * n: the wild place joins the ramified set
        total += 1 + (p - 1) * fn(primes, p, wild_bound)
    return total


def g_steps(
    model: WeierstrassModel,
    p: int,
    bound: int,
    *,
    cache: TraceCache | None = None,
    jobs: int = 1,
    method: str = "dfs",
) -> tuple[tuple[int, int], ...]:
    """Jump points of X -> g_of_X(X) as (conductor, running count).

    The step list pins the function on all of [1, bound]: the count is zero
    before the first jump and constant between consecutive jumps, so two
    methods producing equal step lists agree at every X.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    weight_fn = _WEIGHT_METHODS.get(method)
    if weight_fn is None:
        raise ValueError(f"unknown method {method!r}")
    primes = script_q_primes(model, p, bound, cache=cache, jobs=jobs)
    weights = weight_fn(primes, p, bound)
    steps = []
    running = 0
    for value in sorted(weights):
        running += weights[value]
        steps.append((value, running))
    return tuple(steps)


def m_steps(p: int, bound: int, *, method: str = "dfs") -> tuple[tuple[int, int], ...]:
    """Jump points of X -> M_of_X(X) as (discriminant, running count)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    weight_fn = _WEIGHT_METHODS.get(method)
    if weight_fn is None:
        raise ValueError(f"unknown method {method!r}")
    max_conductor = iroot(bound, p - 1)
    if max_conductor < 2:
        return ()
    primes = [ell for ell in sieve_primes(max_conductor).primes if ell % p == 1]
    by_conductor = dict(weight_fn(primes, p, max_conductor))
    wild_bound = max_conductor // (p * p)
    if wild_bound >= 1:
        by_conductor[p * p] = 1
        for n, w in weight_fn(primes, p, wild_bound).items():
            # tame conductors are squarefree, so p^2 * n never collides
            by_conductor[p * p * n] = (p - 1) * w
    steps = []
    running = 0
    for conductor in sorted(by_conductor):
        running += by_conductor[conductor]
        steps.append((conductor ** (p - 1), running))
    return tuple(steps)


def extension_record(ext: CyclicExtension) -> dict:
    """JSON-ready dump of one extension."""
    vector = list(ext.exponents) + ([ext.wild_exponent] if ext.wild_at_p else [])
    return {
        "p": ext.p,
        "tame_ramified": list(ext.tame_ramified),
        "wild_at_p": ext.wild_at_p,
        "exponents": vector,
        "discriminant": discriminant(ext),
    }
