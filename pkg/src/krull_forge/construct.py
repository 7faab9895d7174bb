"""Realizing a prescribed class group with a shift automorphism.

The basis is ``P = {0..orbit_count-1} x Z x G`` with class map
``(i, n, g) -> g`` and automorphism ``(i, n, g) -> (i, n + 1, g)``.  ``H`` is
the submonoid of ``F(P)`` with vanishing class sum.  Primes are ordered by
orbit identifier ``(i, g)`` and then by shift, which makes the automorphism
strictly increasing; the lexicographic extension orders the quotient group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from krull_forge.abelian import FGAbelianGroup
from krull_forge.freeab import Cmp, FreeAbelian, fa_gcd, lex_compare
from krull_forge.krull import (
    KrullMonoidSpec,
    Prime,
    _orbit_key,
    ideal_class,
    is_member,
    make_spec,
)


@dataclass(frozen=True)
class RealizationParams:
    group: FGAbelianGroup
    orbit_count: int = 1

    def __post_init__(self) -> None:
        if self.orbit_count < 1:
            raise ValueError("orbit_count must be >= 1")


def build_realization(params: RealizationParams) -> KrullMonoidSpec:
    return make_spec(params.group, "shift", params.orbit_count)


orbit_order_key = _orbit_key


def orbit_order_compare(p: Prime, q: Prime) -> Cmp:
    kp, kq = orbit_order_key(p), orbit_order_key(q)
    if kp == kq:
        return Cmp.EQ
    return Cmp.LT if kp < kq else Cmp.GT


def quotient_order_compare(spec: KrullMonoidSpec, a: FreeAbelian, b: FreeAbelian) -> Cmp:
    for x in (a, b):
        if not ideal_class(spec, x).is_zero():
            raise ValueError(f"{x!r} has nonzero class sum; not in the quotient group of H")
    return lex_compare(a, b, spec.order_key)


@dataclass
class DivisorTheoryReport:
    passed: bool
    samples: int
    witnesses: list[tuple[Prime, FreeAbelian, FreeAbelian]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


def verify_divisor_theory(spec: KrullMonoidSpec, sample_count: int, seed: int) -> DivisorTheoryReport:
    """Exhibit, for each sampled prime ``p``, members ``p*c`` and ``p*c'`` with gcd ``p``.

    This is the finite witness that ``p`` is the divisor of a divisorial
    ideal generated by elements of ``H``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    report = DivisorTheoryReport(passed=True, samples=sample_count)
    for p in spec.enumerate(sample_count, seed):
        complements = [c for c in spec.primes_in_class(-spec.cls(p), 3) if c != p]
        if len(complements) < 2:
            report.passed = False
            report.failures.append(f"no two complements for {p!r}")
            continue
        c1, c2 = complements[:2]
        h1 = FreeAbelian.prime(p) * FreeAbelian.prime(c1)
        h2 = FreeAbelian.prime(p) * FreeAbelian.prime(c2)
        if not (is_member(spec, h1) and is_member(spec, h2)):
            report.passed = False
            report.failures.append(f"witnesses for {p!r} are not in H")
            continue
        if fa_gcd(h1, h2) != FreeAbelian.prime(p):
            report.passed = False
            report.failures.append(f"gcd of witnesses for {p!r} is not p")
            continue
        report.witnesses.append((p, h1, h2))
    return report
