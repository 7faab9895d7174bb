"""Krull monoids presented through a divisor theory ``H ⊂ F(P)``.

Divisorial (fractional) ideals of ``H`` are identified with elements of the
free abelian group on ``P``: the ideal generated by a finite set is the gcd
of its members, the divisorial product is multiplication, and containment
of ideals is reverse divisibility.  ``H`` itself is the set of nonnegative
elements whose class sum vanishes.

A :class:`KrullMonoidSpec` bundles the class map on primes, the monoid
automorphism (as a permutation of primes), the basis order and samplers.
Besides the shift construction used for realization, two adversarial
families are provided (``identity_spec`` and ``cycle_spec``) whose
automorphisms have finite orbits; they act as positive controls for the
simplicity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, NamedTuple

import numpy as np

from krull_forge.abelian import FGAbelianGroup, GroupElem, GroupHom, random_elem
from krull_forge.freeab import FreeAbelian, fa_divides, fa_gcd
from krull_forge.rng import randint, stream

Divisor = FreeAbelian
MonoidElem = FreeAbelian

SHIFT_SPAN = 1000
CYCLE_ORBIT_SPAN = 10**6


class Prime(NamedTuple):
    """Basis index ``(orbit, shift, class)`` of a divisorial prime."""

    orbit: int
    shift: int
    cls: GroupElem

    def __repr__(self) -> str:
        return f"p[{self.orbit},{self.shift},{self.cls}]"


@dataclass(frozen=True, eq=False)
class KrullMonoidSpec:
    class_group: FGAbelianGroup
    cls: Callable[[Prime], GroupElem]
    tau: Callable[[Prime], Prime]
    tau_inv: Callable[[Prime], Prime]
    order_key: Callable[[Prime], tuple]
    random_prime: Callable[[np.random.Generator], Prime]
    primes_in_class: Callable[[GroupElem, int], list[Prime]]
    kind: str
    orbit_count: int

    def enumerate(self, count: int, seed: int) -> list[Prime]:
        """``count`` pairwise distinct primes, deterministic in ``seed``."""
        rng = stream(seed, "enumerate")
        seen: dict[Prime, None] = {}
        attempts = 0
        while len(seen) < count:
            seen.setdefault(self.random_prime(rng), None)
            attempts += 1
            if attempts > 50 * count + 1000:
                raise RuntimeError("prime sampler cannot produce enough distinct primes")
        return list(seen)

    def tau_pow(self, p: Prime, n: int) -> Prime:
        step = self.tau if n >= 0 else self.tau_inv
        for _ in range(abs(n)):
            p = step(p)
        return p

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "orbit_count": self.orbit_count,
            "class_group": self.class_group.to_dict(),
        }


def _orbit_key(p: Prime) -> tuple:
    return (p.orbit, p.cls.coords, p.shift)


def _interleaved_shifts() -> Iterable[int]:
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def make_spec(group: FGAbelianGroup, kind: str, orbit_count: int = 1) -> KrullMonoidSpec:
    """Build a spec on ``P = {(i, n, g)}`` with ``cls((i, n, g)) = g``.

    ``kind`` is ``"shift"`` (``n -> n + 1``, no finite orbits),
    ``"identity"`` or ``"cycle:k"`` (``n -> n + 1 mod k`` with ``n`` in
    ``[0, k)``; orbit identifiers are then unbounded so the basis stays
    infinite).
    """
    if orbit_count < 1:
        raise ValueError("orbit_count must be >= 1")

    def cls(p: Prime) -> GroupElem:
        return p.cls

    if kind == "shift":
        def tau(p: Prime) -> Prime:
            return Prime(p.orbit, p.shift + 1, p.cls)

        def tau_inv(p: Prime) -> Prime:
            return Prime(p.orbit, p.shift - 1, p.cls)
    elif kind == "identity":
        def tau(p: Prime) -> Prime:
            return p

        tau_inv = tau
    elif kind.startswith("cycle:"):
        k = int(kind.split(":", 1)[1])
        if k < 1:
            raise ValueError("cycle length must be >= 1")

        def tau(p: Prime) -> Prime:
            return Prime(p.orbit, (p.shift + 1) % k, p.cls)

        def tau_inv(p: Prime) -> Prime:
            return Prime(p.orbit, (p.shift - 1) % k, p.cls)
    else:
        raise ValueError(f"unknown spec kind {kind!r}")

    cycle = kind.startswith("cycle:")
    cycle_len = int(kind.split(":", 1)[1]) if cycle else 0

    def random_prime(rng: np.random.Generator) -> Prime:
        g = random_elem(group, rng, free_bound=3)
        if cycle:
            return Prime(randint(rng, 0, CYCLE_ORBIT_SPAN), randint(rng, 0, cycle_len - 1), g)
        return Prime(randint(rng, 0, orbit_count - 1), randint(rng, -SHIFT_SPAN, SHIFT_SPAN), g)

    def primes_in_class(g: GroupElem, count: int) -> list[Prime]:
        if g.group != group:
            raise ValueError(f"{g} is not a class of {group}")
        out: list[Prime] = []
        if cycle:
            for i in range(math.ceil(count / cycle_len)):
                out += [Prime(i, n, g) for n in range(cycle_len)]
            return out[:count]
        shifts = _interleaved_shifts()
        while len(out) < count:
            n = next(shifts)
            out += [Prime(i, n, g) for i in range(orbit_count)]
        return out[:count]

    return KrullMonoidSpec(
        class_group=group,
        cls=cls,
        tau=tau,
        tau_inv=tau_inv,
        order_key=_orbit_key,
        random_prime=random_prime,
        primes_in_class=primes_in_class,
        kind=kind,
        orbit_count=orbit_count,
    )


def identity_spec(group: FGAbelianGroup, orbit_count: int = 1) -> KrullMonoidSpec:
    return make_spec(group, "identity", orbit_count)


def cycle_spec(group: FGAbelianGroup, k: int) -> KrullMonoidSpec:
    return make_spec(group, f"cycle:{k}")


def adversarial_spec(group: FGAbelianGroup, mode: str, orbit_count: int = 1) -> KrullMonoidSpec:
    """``mode`` is ``"identity"`` or ``"cycle:k"``."""
    if mode == "identity":
        return identity_spec(group, orbit_count)
    if mode.startswith("cycle:"):
        return cycle_spec(group, int(mode.split(":", 1)[1]))
    raise ValueError(f"unknown adversarial mode {mode!r}")


# ---------------------------------------------------------------------------
# Divisorial ideal arithmetic


def ideal_class(spec: KrullMonoidSpec, a: Divisor) -> GroupElem:
    G = spec.class_group
    coords = [0] * G.ngens
    for p, n in a.items():
        for i, c in enumerate(spec.cls(p).coords):
            coords[i] += n * c
    return G.elem(coords)


def is_member(spec: KrullMonoidSpec, a: FreeAbelian) -> bool:
    return a.is_nonnegative() and ideal_class(spec, a).is_zero()


def v_ideal_of(spec: KrullMonoidSpec, X: Iterable[FreeAbelian]) -> Divisor:
    """Divisor of the divisorial fractional ideal generated by ``X``."""
    gens = list(X)
    if not gens:
        raise ValueError("generating set must be nonempty")
    for a in gens:
        if not ideal_class(spec, a).is_zero():
            raise ValueError(f"{a!r} has nonzero class sum and is not in the quotient group")
    out = gens[0]
    for a in gens[1:]:
        out = fa_gcd(out, a)
    return out


def v_product(a: Divisor, b: Divisor) -> Divisor:
    return a * b


def tau_star(spec: KrullMonoidSpec, a: Divisor) -> Divisor:
    return a.map_basis(spec.tau)


def tau_star_inv(spec: KrullMonoidSpec, a: Divisor) -> Divisor:
    return a.map_basis(spec.tau_inv)


def contains(a: Divisor, b: Divisor) -> bool:
    """Ideal containment ``b ⊂ a`` (as ideals), i.e. divisor ``a`` divides ``b``."""
    return fa_divides(a, b)


class Stability(Enum):
    EQUAL = "equal"
    MOVED = "moved"
    PROPER_CONTAINMENT = "proper-containment"


class StabilityResult(NamedTuple):
    verdict: Stability
    witness: Divisor | None = None


def stability_check(spec: KrullMonoidSpec, a: Divisor) -> StabilityResult:
    """Classify ``a`` against its image under the automorphism.

    ``PROPER_CONTAINMENT`` means one of ``tau(a)``, ``a`` strictly contains
    the other; the witness is the nontrivial cofactor.  For divisorial
    ideals this cannot happen, so it only ever signals a bug.
    """
    image = tau_star(spec, a)
    if image == a:
        return StabilityResult(Stability.EQUAL)
    if fa_divides(a, image):
        return StabilityResult(Stability.PROPER_CONTAINMENT, image / a)
    if fa_divides(image, a):
        return StabilityResult(Stability.PROPER_CONTAINMENT, a / image)
    return StabilityResult(Stability.MOVED)


def finite_orbit_up_to(spec: KrullMonoidSpec, p: Prime, N: int) -> int | None:
    """Least ``n`` in ``[1, N]`` with ``tau^n(p) == p``, else ``None``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    q = p
    for n in range(1, N + 1):
        q = spec.tau(q)
        if q == p:
            return n
    return None


def fixed_prime_set_check(spec: KrullMonoidSpec, X: Iterable[Prime]) -> bool:
    primes = set(X)
    if not primes:
        raise ValueError("prime set must be nonempty")
    return {spec.tau(p) for p in primes} == primes


def induced_class_map(spec: KrullMonoidSpec) -> GroupHom:
    """Action of the automorphism on the class group, read off one prime per generator."""
    G = spec.class_group
    images = []
    for g in G.gens():
        p = spec.primes_in_class(g, 1)[0]
        images.append(ideal_class(spec, FreeAbelian.prime(spec.tau(p))))
    if not images:
        return GroupHom.identity(G)
    return GroupHom.from_images(G, images)


# ---------------------------------------------------------------------------
# Samplers


def orbit_segment(spec: KrullMonoidSpec, p: Prime, length: int) -> set[Prime]:
    out = set()
    q = p
    for _ in range(length):
        out.add(q)
        q = spec.tau(q)
    return out


def _support_primes(spec: KrullMonoidSpec, rng: np.random.Generator, k: int) -> list[Prime]:
    # Mix fresh primes with nearby orbit members so that supports overlap
    # their own images often enough to exercise the containment tests.
    primes = [spec.random_prime(rng)]
    while len(primes) < k:
        if rng.random() < 0.5:
            base = primes[randint(rng, 0, len(primes) - 1)]
            primes.append(spec.tau_pow(base, randint(rng, -3, 3)))
        else:
            primes.append(spec.random_prime(rng))
    return primes


def _compensate(spec: KrullMonoidSpec, a: FreeAbelian) -> FreeAbelian:
    c = ideal_class(spec, a)
    if c.is_zero():
        return a
    return a * FreeAbelian.prime(spec.primes_in_class(-c, 1)[0])


def random_divisor(
    spec: KrullMonoidSpec,
    rng: np.random.Generator,
    *,
    nonnegative: bool = False,
    max_support: int = 4,
    max_exp: int = 3,
) -> Divisor:
    k = randint(rng, 0, max_support)
    if k == 0:
        return FreeAbelian.one()
    lo = 1 if nonnegative else -max_exp
    exps = []
    for p in _support_primes(spec, rng, k):
        e = 0
        while e == 0:
            e = randint(rng, lo, max_exp)
        exps.append((p, e))
    return FreeAbelian(exps)


def random_quotient_elem(spec: KrullMonoidSpec, rng: np.random.Generator, max_support: int = 3) -> FreeAbelian:
    """Random element of the quotient group of ``H`` (class sum zero)."""
    return _compensate(spec, random_divisor(spec, rng, max_support=max_support))


def random_member(spec: KrullMonoidSpec, rng: np.random.Generator, max_support: int = 3) -> MonoidElem:
    """Random non-identity element of ``H``."""
    a = FreeAbelian.one()
    while a.is_one():
        a = _compensate(spec, random_divisor(spec, rng, nonnegative=True, max_support=max_support))
    return a


def squarefree_product(primes: Iterable[Prime]) -> Divisor:
    return FreeAbelian((p, 1) for p in set(primes))


def random_invariant_candidate(spec: KrullMonoidSpec, rng: np.random.Generator, segment_bound: int) -> FreeAbelian:
    """Class-sum-zero element built from orbit segments.

    Under an automorphism with an orbit of length at most ``segment_bound``
    these elements are fixed with positive probability; under the shift
    they never are.
    """
    p = spec.random_prime(rng)
    seg = orbit_segment(spec, p, randint(rng, 1, segment_bound))
    q = spec.primes_in_class(-spec.cls(p), 1)[0]
    q = spec.tau_pow(q, randint(rng, 0, 5))
    seg2 = orbit_segment(spec, q, randint(rng, 1, segment_bound))
    e = randint(rng, 1, 2)
    a = squarefree_product(seg) ** e
    b = squarefree_product(seg2) ** e
    # Balance multiplicities so the class sum vanishes: |seg| copies of
    # class g against |seg2| copies of class -g.
    return _compensate(spec, (a ** len(seg2)) * (b ** len(seg)))


# ---------------------------------------------------------------------------
# tau-v-simplicity: three equivalent conditions checked on samples


class SimplicityVerdicts(NamedTuple):
    fixed_ideal: Divisor | None
    fixed_prime_set: frozenset | None
    finite_orbit: tuple[Prime, int] | None

    @property
    def verdicts(self) -> tuple[bool, bool, bool]:
        """``True`` means the check found no counterexample (looks simple)."""
        return (self.fixed_ideal is None, self.fixed_prime_set is None, self.finite_orbit is None)

    def agree(self) -> bool:
        return len(set(self.verdicts)) == 1


def find_fixed_ideal(spec: KrullMonoidSpec, ideals: Iterable[Divisor]) -> Divisor | None:
    for a in ideals:
        if not a.is_one() and tau_star(spec, a) == a:
            return a
    return None


def find_fixed_prime_set(spec: KrullMonoidSpec, sets: Iterable[Iterable[Prime]]) -> frozenset | None:
    for X in sets:
        X = frozenset(X)
        if X and fixed_prime_set_check(spec, X):
            return X
    return None


def find_finite_orbit(spec: KrullMonoidSpec, primes: Iterable[Prime], N: int) -> tuple[Prime, int] | None:
    for p in primes:
        n = finite_orbit_up_to(spec, p, N)
        if n is not None:
            return p, n
    return None


def simplicity_verdicts(
    spec: KrullMonoidSpec,
    samples: int,
    bound: int,
    seed: int,
    segment_bound: int = 12,
) -> SimplicityVerdicts:
    """Run the ideal / prime-set / orbit checks on one sampled instance.

    Prime sets are unions of orbit segments of length at most
    ``segment_bound``; ideals are powers of their squarefree products plus
    random nonnegative divisors.  Orbits are followed up to ``bound``.
    """
    rng = stream(seed, "simplicity", spec.kind)
    primes = [spec.random_prime(rng) for _ in range(samples)]
    sets: list[set[Prime]] = []
    for i, p in enumerate(primes):
        # Every other set is a full-length segment, which closes up exactly
        # when the orbit of p has length at most segment_bound.
        length = segment_bound if i % 2 == 0 else randint(rng, 1, segment_bound)
        X = orbit_segment(spec, p, length)
        if rng.random() < 0.3:
            X |= orbit_segment(spec, spec.random_prime(rng), randint(rng, 1, segment_bound))
        sets.append(X)
    ideals = [squarefree_product(X) ** randint(rng, 1, 3) for X in sets]
    ideals += [random_divisor(spec, rng, nonnegative=True) for _ in range(samples)]
    return SimplicityVerdicts(
        fixed_ideal=find_fixed_ideal(spec, ideals),
        fixed_prime_set=find_fixed_prime_set(spec, sets),
        finite_orbit=find_finite_orbit(spec, primes, bound),
    )


def check_spec_invariants(spec: KrullMonoidSpec, samples: int, seed: int) -> list[str]:
    """Return a list of violated invariants (empty when all hold at sample scale)."""
    problems = []
    for p in spec.enumerate(samples, seed):
        if spec.tau_inv(spec.tau(p)) != p or spec.tau(spec.tau_inv(p)) != p:
            problems.append(f"tau is not inverted by tau_inv at {p!r}")
        if spec.cls(spec.tau(p)) != spec.cls(p):
            problems.append(f"tau changes the class of {p!r}")
    G = spec.class_group
    rng = stream(seed, "surjectivity")
    classes = list(G.elements()) if G.order() is not None and G.order() <= samples else [
        random_elem(G, rng, free_bound=5) for _ in range(min(samples, 25))
    ]
    for g in classes:
        hits = spec.primes_in_class(g, 1)
        if not hits or spec.cls(hits[0]) != g:
            problems.append(f"class {g} has no prime")
    return problems
