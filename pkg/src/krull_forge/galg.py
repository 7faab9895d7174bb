"""Group algebras ``K[G]`` over exact fields, with normed generators.

``G`` is the quotient group of a Krull monoid spec, totally ordered by the
lexicographic order of its basis.  Units of ``K[G]`` are the monomials
``λ·g``, so every nonzero principal ideal has exactly one generator of the
form ``1 + f`` with ``supp(f) > 1``.  Comparing those generators decides
whether the automorphism ``φ`` (``τ`` on the group, ``σ`` on coefficients)
moves a principal ideal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from krull_forge.freeab import Cmp, FreeAbelian, lex_compare
from krull_forge.krull import (
    KrullMonoidSpec,
    ideal_class,
    random_invariant_candidate,
    random_quotient_elem,
)
from krull_forge.rng import randint


class AlgebraMismatchError(ValueError):
    pass


class RationalField:
    name = "QQ"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / x

    def random_nonzero(self, rng: np.random.Generator) -> Fraction:
        num = 0
        while num == 0:
            num = randint(rng, -6, 6)
        return Fraction(num, randint(rng, 1, 3))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return self.name


class PrimeField:
    """``F_p``; elements are least nonnegative residues."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(x, -1, self.p)

    def random_nonzero(self, rng: np.random.Generator) -> int:
        return randint(rng, 1, self.p - 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return self.name


Field = RationalField | PrimeField


class GroupAlgebra:
    """``K[G]`` for the quotient group ``G`` of ``spec``.

    ``sigma``/``sigma_inv`` act on coefficients.  Neither QQ nor GF(p) has
    a nontrivial field automorphism, so the shipped pipeline leaves both as
    ``None`` (identity); the hook exists for richer coefficient rings.
    """

    def __init__(
        self,
        spec: KrullMonoidSpec,
        field: Field | None = None,
        sigma: Callable | None = None,
        sigma_inv: Callable | None = None,
    ):
        if (sigma is None) != (sigma_inv is None):
            raise ValueError("sigma and sigma_inv must be given together")
        self.spec = spec
        self.field = field if field is not None else RationalField()
        self.sigma = sigma
        self.sigma_inv = sigma_inv

    def elem(self, terms: Mapping[FreeAbelian, object]) -> GroupAlgebraElem:
        for g in terms:
            if not ideal_class(self.spec, g).is_zero():
                raise ValueError(f"support element {g!r} has nonzero class sum")
        return GroupAlgebraElem._make(self, {g: self.field(c) for g, c in terms.items()})

    def zero(self) -> GroupAlgebraElem:
        return GroupAlgebraElem._make(self, {})

    def one(self) -> GroupAlgebraElem:
        return self.monomial(FreeAbelian.one())

    def monomial(self, g: FreeAbelian, c=1) -> GroupAlgebraElem:
        return self.elem({g: c})

    def scalar(self, c) -> GroupAlgebraElem:
        return self.monomial(FreeAbelian.one(), c)


class GroupAlgebraElem:
    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GroupAlgebra, terms: Mapping[FreeAbelian, object]):
        clean = algebra.elem(terms)
        self.algebra = algebra
        self.terms = clean.terms
        self._hash = None

    @classmethod
    def _make(cls, algebra: GroupAlgebra, terms: dict) -> GroupAlgebraElem:
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = {g: c for g, c in terms.items() if c != 0}
        obj._hash = None
        return obj

    def _check(self, other: GroupAlgebraElem) -> None:
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("elements belong to different algebras")

    def supp(self) -> frozenset:
        return frozenset(self.terms)

    def coeff(self, g: FreeAbelian):
        return self.terms.get(g, self.algebra.field(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: GroupAlgebraElem) -> GroupAlgebraElem:
        self._check(other)
        F = self.algebra.field
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = F(out.get(g, 0) + c)
        return GroupAlgebraElem._make(self.algebra, out)

    def __neg__(self) -> GroupAlgebraElem:
        F = self.algebra.field
        return GroupAlgebraElem._make(self.algebra, {g: F(-c) for g, c in self.terms.items()})

    def __sub__(self, other: GroupAlgebraElem) -> GroupAlgebraElem:
        return self + (-other)

    def __mul__(self, other: GroupAlgebraElem) -> GroupAlgebraElem:
        self._check(other)
        F = self.algebra.field
        out: dict[FreeAbelian, object] = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = g * h
                out[k] = F(out.get(k, 0) + a * b)
        return GroupAlgebraElem._make(self.algebra, out)

    def scale(self, c) -> GroupAlgebraElem:
        F = self.algebra.field
        return GroupAlgebraElem._make(self.algebra, {g: F(c * a) for g, a in self.terms.items()})

    def shift(self, u: FreeAbelian) -> GroupAlgebraElem:
        return GroupAlgebraElem._make(self.algebra, {u * g: a for g, a in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElem):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{g!r}]" for g, c in self.terms.items())


def ga_add(f: GroupAlgebraElem, g: GroupAlgebraElem) -> GroupAlgebraElem:
    return f + g


def ga_mul(f: GroupAlgebraElem, g: GroupAlgebraElem) -> GroupAlgebraElem:
    return f * g


def min_support(f: GroupAlgebraElem) -> FreeAbelian:
    key = f.algebra.spec.order_key
    it = iter(f.terms)
    best = next(it)
    for g in it:
        if lex_compare(g, best, key) is Cmp.LT:
            best = g
    return best


def normed_generator(f: GroupAlgebraElem) -> GroupAlgebraElem:
    """The generator ``1 + f'`` (``supp(f') > 1``) of the principal ideal ``f·K[G]``."""
    if f.is_zero():
        raise ValueError("the zero ideal has no normed generator")
    g = min_support(f)
    lam = f.terms[g]
    return f.shift(g.inv()).scale(f.algebra.field.inv(lam))


def phi_apply(f: GroupAlgebraElem, n: int = 1) -> GroupAlgebraElem:
    """Apply ``φ^n``: ``τ^n`` on the group, ``σ^n`` on coefficients."""
    algebra = f.algebra
    spec = algebra.spec
    if n == 1:
        relabel = spec.tau
    elif n == -1:
        relabel = spec.tau_inv
    else:
        def relabel(p):
            return spec.tau_pow(p, n)

    def coef(c):
        if algebra.sigma is None:
            return c
        step = algebra.sigma if n >= 0 else algebra.sigma_inv
        for _ in range(abs(n)):
            c = step(c)
        return c

    return GroupAlgebraElem._make(
        algebra, {g.map_basis(relabel): coef(c) for g, c in f.terms.items()}
    )


def principal_ideal_moved(f: GroupAlgebraElem) -> bool:
    """Whether ``φ(f·K[G]) != f·K[G]``, decided by normed generators."""
    if f.is_zero():
        raise ValueError("zero element")
    if f.is_unit():
        raise ValueError("units generate the whole algebra")
    return normed_generator(phi_apply(f)) != normed_generator(f)


# ---------------------------------------------------------------------------
# Samplers


def random_unit(algebra: GroupAlgebra, rng: np.random.Generator) -> GroupAlgebraElem:
    g = random_quotient_elem(algebra.spec, rng)
    return GroupAlgebraElem._make(algebra, {g: algebra.field.random_nonzero(rng)})


def random_elem(
    algebra: GroupAlgebra, rng: np.random.Generator, min_terms: int = 1, max_terms: int = 4
) -> GroupAlgebraElem:
    target = randint(rng, min_terms, max_terms)
    terms: dict[FreeAbelian, object] = {}
    guard = 0
    while len(terms) < target:
        terms[random_quotient_elem(algebra.spec, rng)] = algebra.field.random_nonzero(rng)
        guard += 1
        if guard > 100 * target:
            break
    return GroupAlgebraElem._make(algebra, terms)


def random_nonunit(algebra: GroupAlgebra, rng: np.random.Generator, max_terms: int = 4) -> GroupAlgebraElem:
    while True:
        f = random_elem(algebra, rng, 2, max_terms)
        if len(f.terms) >= 2:
            return f


def random_invariant_nonunit(
    algebra: GroupAlgebra, rng: np.random.Generator, segment_bound: int = 12
) -> GroupAlgebraElem:
    """``λ + μ·u`` with ``u`` assembled from orbit segments (see ``random_invariant_candidate``)."""
    F = algebra.field
    while True:
        u = random_invariant_candidate(algebra.spec, rng, segment_bound)
        if not u.is_one():
            return GroupAlgebraElem._make(
                algebra, {FreeAbelian.one(): F.random_nonzero(rng), u: F.random_nonzero(rng)}
            )
