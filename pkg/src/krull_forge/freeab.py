"""Finite-support free abelian groups over an ordered basis.

An element ``p1^n1 * ... * pr^nr`` is stored as a mapping from basis index
to nonzero exponent.  The basis order is never taken from the indices
themselves: every order-dependent function receives a ``key`` callable that
maps an index to a sortable value.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

OrderKey = Callable[[Any], Any]


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class FreeAbelian:
    """Immutable element of the free abelian group on a set of basis indices."""

    __slots__ = ("_exp", "_hash")

    def __init__(self, exponents: Mapping[Hashable, int] | Iterable[tuple[Hashable, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        exp: dict[Hashable, int] = {}
        for p, n in items:
            n = exp.get(p, 0) + int(n)
            if n:
                exp[p] = n
            else:
                exp.pop(p, None)
        self._exp = exp
        self._hash: int | None = None

    @classmethod
    def _raw(cls, exp: dict) -> FreeAbelian:
        obj = cls.__new__(cls)
        obj._exp = exp
        obj._hash = None
        return obj

    @classmethod
    def prime(cls, p: Hashable, n: int = 1) -> FreeAbelian:
        return cls._raw({p: n} if n else {})

    @classmethod
    def one(cls) -> FreeAbelian:
        return cls._raw({})

    def items(self) -> Iterator[tuple[Hashable, int]]:
        return iter(self._exp.items())

    def supp(self) -> frozenset:
        return frozenset(self._exp)

    def val(self, p: Hashable) -> int:
        return self._exp.get(p, 0)

    def is_one(self) -> bool:
        return not self._exp

    def is_nonnegative(self) -> bool:
        return all(n > 0 for n in self._exp.values())

    def degree(self) -> int:
        return sum(self._exp.values())

    def __len__(self) -> int:
        return len(self._exp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeAbelian):
            return NotImplemented
        return self._exp == other._exp

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._exp.items()))
        return self._hash

    def __mul__(self, other: FreeAbelian) -> FreeAbelian:
        if len(other._exp) > len(self._exp):
            self, other = other, self
        exp = dict(self._exp)
        for p, n in other._exp.items():
            m = exp.get(p, 0) + n
            if m:
                exp[p] = m
            else:
                del exp[p]
        return FreeAbelian._raw(exp)

    def inv(self) -> FreeAbelian:
        return FreeAbelian._raw({p: -n for p, n in self._exp.items()})

    def __truediv__(self, other: FreeAbelian) -> FreeAbelian:
        return self * other.inv()

    def __pow__(self, k: int) -> FreeAbelian:
        if k == 0:
            return FreeAbelian.one()
        return FreeAbelian._raw({p: k * n for p, n in self._exp.items()})

    def map_basis(self, f: Callable[[Hashable], Hashable]) -> FreeAbelian:
        """Relabel every basis index through ``f`` (assumed injective)."""
        return FreeAbelian._raw({f(p): n for p, n in self._exp.items()})

    def __repr__(self) -> str:
        if not self._exp:
            return "1"
        parts = []
        for p, n in sorted(self._exp.items(), key=lambda kv: repr(kv[0])):
            parts.append(f"{p!r}" if n == 1 else f"{p!r}^{n}")
        return "*".join(parts)


def fa_mul(a: FreeAbelian, b: FreeAbelian) -> FreeAbelian:
    return a * b


def fa_inv(a: FreeAbelian) -> FreeAbelian:
    return a.inv()


def fa_gcd(a: FreeAbelian, b: FreeAbelian) -> FreeAbelian:
    """Exponent-wise minimum over the union of supports (missing exponents are 0)."""
    return FreeAbelian((p, min(a.val(p), b.val(p))) for p in a.supp() | b.supp())


def fa_divides(a: FreeAbelian, b: FreeAbelian) -> bool:
    return all(a.val(p) <= b.val(p) for p in a.supp() | b.supp())


def fa_supp(a: FreeAbelian) -> frozenset:
    return a.supp()


def fa_val(a: FreeAbelian, p: Hashable) -> int:
    return a.val(p)


def sign(a: FreeAbelian, key: OrderKey) -> Cmp:
    """Sign of ``a`` against 1: the sign of the exponent at the largest support index."""
    if a.is_one():
        return Cmp.EQ
    top = max(a.supp(), key=key)
    return Cmp.GT if a.val(top) > 0 else Cmp.LT


def lex_compare(a: FreeAbelian, b: FreeAbelian, key: OrderKey) -> Cmp:
    """Compare ``a`` and ``b`` in the lexicographic group order induced by ``key``."""
    return sign(a / b, key)
