"""Skew Laurent polynomials ``T = R[x, x^-1; σ]`` and the class group of ``T``.

Elements are kept in the normal form ``Σ x^m · a_m`` (powers of ``x`` on
the left).  The defining relation ``a·x = x·σ(a)`` gives the monomial
product ``(x^m a)(x^n b) = x^(m+n) σ^n(a) b``.

The class group of ``T`` is computed from the exact sequence

    C/A --(id - σ*)--> C/A --β--> G(T) --> 0

where ``C`` is the class group of the coefficient ring before localization
and ``A`` is generated by the classes killed by the localization.  The
localizing set itself is never built; only the killed classes enter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from krull_forge.abelian import (
    FGAbelianGroup,
    GroupElem,
    GroupHom,
    GroupMismatchError,
    cokernel,
    subgroup_quotient,
)
from krull_forge.galg import (
    AlgebraMismatchError,
    GroupAlgebra,
    GroupAlgebraElem,
    phi_apply,
    principal_ideal_moved,
    random_elem as random_algebra_elem,
    random_invariant_nonunit,
    random_nonunit,
)
from krull_forge.krull import KrullMonoidSpec, simplicity_verdicts
from krull_forge.rng import randint, stream


class SkewLaurentPoly:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: GroupAlgebra, coeffs: Mapping[int, GroupAlgebraElem]):
        for a in coeffs.values():
            if a.algebra is not algebra:
                raise AlgebraMismatchError("coefficient from a different algebra")
        self.algebra = algebra
        self.coeffs = {int(m): a for m, a in coeffs.items() if not a.is_zero()}

    @classmethod
    def x(cls, algebra: GroupAlgebra, n: int = 1) -> SkewLaurentPoly:
        return cls(algebra, {n: algebra.one()})

    @classmethod
    def const(cls, a: GroupAlgebraElem) -> SkewLaurentPoly:
        return cls(a.algebra, {0: a})

    @classmethod
    def one(cls, algebra: GroupAlgebra) -> SkewLaurentPoly:
        return cls.x(algebra, 0)

    @classmethod
    def zero(cls, algebra: GroupAlgebra) -> SkewLaurentPoly:
        return cls(algebra, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: SkewLaurentPoly) -> None:
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("polynomials over different coefficient algebras")

    def __add__(self, other: SkewLaurentPoly) -> SkewLaurentPoly:
        return skew_add(self, other)

    def __neg__(self) -> SkewLaurentPoly:
        return SkewLaurentPoly(self.algebra, {m: -a for m, a in self.coeffs.items()})

    def __sub__(self, other: SkewLaurentPoly) -> SkewLaurentPoly:
        return skew_add(self, -other)

    def __mul__(self, other: SkewLaurentPoly) -> SkewLaurentPoly:
        return skew_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewLaurentPoly):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"x^{m}*({a!r})" for m, a in sorted(self.coeffs.items()))


def skew_add(f: SkewLaurentPoly, g: SkewLaurentPoly) -> SkewLaurentPoly:
    f._check(g)
    out = dict(f.coeffs)
    for m, a in g.coeffs.items():
        out[m] = out[m] + a if m in out else a
    return SkewLaurentPoly(f.algebra, out)


def skew_mul(f: SkewLaurentPoly, g: SkewLaurentPoly) -> SkewLaurentPoly:
    f._check(g)
    out: dict[int, GroupAlgebraElem] = {}
    twisted: dict[tuple[int, int], GroupAlgebraElem] = {}
    for m, a in f.coeffs.items():
        for n, b in g.coeffs.items():
            key = (m, n)
            if key not in twisted:
                twisted[key] = phi_apply(a, n) if n else a
            term = twisted[key] * b
            k = m + n
            out[k] = out[k] + term if k in out else term
    return SkewLaurentPoly(f.algebra, out)


# ---------------------------------------------------------------------------
# Simplicity certificate


@dataclass
class CertificateCheck:
    name: str
    passed: bool
    evidence: dict


@dataclass
class SimplicityCertificate:
    """Outcome of sampled simplicity checks.

    A pass means no counterexample was found at the recorded bound and
    sample size; it is evidence, not a proof.
    """

    bound: int
    samples: int
    seed: int
    checks: list[CertificateCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "scope": f"no counterexample found at bound={self.bound}, samples={self.samples}",
            "bound": self.bound,
            "samples": self.samples,
            "seed": self.seed,
            "checks": [
                {"name": c.name, "verdict": "pass" if c.passed else "fail", "evidence": c.evidence}
                for c in self.checks
            ],
        }


def _automorphism_period(f: GroupAlgebraElem, bound: int) -> int | None:
    """Least ``n <= bound`` with ``φ^n(f) == f``, if any."""
    spec = f.algebra.spec
    primes = frozenset(p for g in f.terms for p, _ in g.items())
    images = {p: p for p in primes}
    for n in range(1, bound + 1):
        images = {p: spec.tau(q) for p, q in images.items()}
        # φ^n(f) == f forces τ^n to permute the primes in the supports.
        if frozenset(images.values()) == primes and phi_apply(f, n) == f:
            return n
    return None


def simplicity_certificate(
    spec: KrullMonoidSpec,
    bound: int,
    sample_count: int,
    seed: int,
    algebra: GroupAlgebra | None = None,
) -> SimplicityCertificate:
    if bound < 1 or sample_count < 1:
        raise ValueError("bound and sample_count must be >= 1")
    algebra = algebra or GroupAlgebra(spec)
    cert = SimplicityCertificate(bound=bound, samples=sample_count, seed=seed)
    base = {"seed": seed, "bound": bound, "samples": sample_count}

    verdicts = simplicity_verdicts(spec, sample_count, bound, seed)
    orbit = verdicts.finite_orbit
    cert.checks.append(CertificateCheck(
        "no-finite-orbit",
        orbit is None,
        {**base, "witness": None if orbit is None else {"prime": repr(orbit[0]), "period": orbit[1]}},
    ))
    fixed = verdicts.fixed_prime_set
    cert.checks.append(CertificateCheck(
        "no-fixed-prime-set",
        fixed is None,
        {**base, "witness": None if fixed is None else sorted(repr(p) for p in fixed)},
    ))
    ideal = verdicts.fixed_ideal
    cert.checks.append(CertificateCheck(
        "no-fixed-divisorial-ideal",
        ideal is None,
        {**base, "witness": None if ideal is None else repr(ideal)},
    ))

    rng = stream(seed, "certificate", "algebra")
    elems = [
        random_invariant_nonunit(algebra, rng) if i % 2 else random_nonunit(algebra, rng)
        for i in range(sample_count)
    ]
    unmoved = next((f for f in elems if not principal_ideal_moved(f)), None)
    cert.checks.append(CertificateCheck(
        "principal-ideal-moved",
        unmoved is None,
        {**base, "witness": None if unmoved is None else repr(unmoved)},
    ))

    periodic = None
    for f in elems:
        n = _automorphism_period(f, bound)
        if n is not None:
            periodic = (f, n)
            break
    cert.checks.append(CertificateCheck(
        "automorphism-order-exceeds-bound",
        periodic is None,
        {**base, "witness": None if periodic is None else {"element": repr(periodic[0]), "period": periodic[1]}},
    ))
    return cert


# ---------------------------------------------------------------------------
# Class groups


def nagata_quotient(C: FGAbelianGroup, killed: Sequence[GroupElem]) -> tuple[FGAbelianGroup, GroupHom]:
    """Class group after localization: ``C`` modulo the classes of primes that meet the localizing set."""
    for g in killed:
        if g.group != C:
            raise GroupMismatchError(f"{g} does not belong to {C}")
    return subgroup_quotient(C, list(killed))


@dataclass
class ClassGroupPipelineResult:
    input_group: FGAbelianGroup
    killed_subgroup_gens: list[GroupElem]
    sigma_star: GroupHom
    localized: FGAbelianGroup
    result: FGAbelianGroup
    projection: GroupHom

    def beta_on_primes(self, g: GroupElem) -> GroupElem:
        """Image in ``G(T)`` of a class of ``C``."""
        return self.projection(g)


def class_group_of_skew_extension(
    C: FGAbelianGroup, sigma_star: GroupHom, killed: Sequence[GroupElem] = ()
) -> ClassGroupPipelineResult:
    if sigma_star.source != C or sigma_star.target != C:
        raise GroupMismatchError("sigma_star must be an endomorphism of C")
    CA, to_CA = nagata_quotient(C, killed)
    for a in killed:
        if not to_CA(sigma_star(a)).is_zero():
            raise ValueError(f"sigma_star does not preserve the killed subgroup (moves {a})")
    # Induced endomorphism on C/A: lift each generator, apply sigma*, project.
    induced_cols = [to_CA(sigma_star(to_CA.lift(q))) for q in CA.gens()]
    if CA.ngens:
        induced = GroupHom.from_images(CA, induced_cols)
    else:
        induced = GroupHom.identity(CA)
    GT, to_GT = cokernel(GroupHom.identity(CA) - induced)
    beta = to_GT.compose(to_CA)
    return ClassGroupPipelineResult(
        input_group=C,
        killed_subgroup_gens=list(killed),
        sigma_star=sigma_star,
        localized=CA,
        result=GT,
        projection=beta,
    )


def full_pipeline(group_spec: str, orbit_count: int = 1, bound: int = 1000, sample_count: int = 200, seed: int = 0):
    from krull_forge.pipeline import full_pipeline as run

    return run(group_spec, orbit_count, bound, sample_count, seed)


def random_skew(algebra: GroupAlgebra, rng: np.random.Generator, max_terms: int = 2, span: int = 2) -> SkewLaurentPoly:
    coeffs = {}
    for _ in range(randint(rng, 1, max_terms)):
        coeffs[randint(rng, -span, span)] = random_algebra_elem(algebra, rng, 1, 2)
    return SkewLaurentPoly(algebra, coeffs)
