"""Deterministic worked example for the ``demo`` command."""

from __future__ import annotations

from typing import Iterator

from krull_forge.abelian import FGAbelianGroup, GroupHom
from krull_forge.construct import RealizationParams, build_realization, quotient_order_compare
from krull_forge.freeab import Cmp, FreeAbelian
from krull_forge.galg import GroupAlgebra, normed_generator, phi_apply, principal_ideal_moved
from krull_forge.krull import (
    ideal_class,
    induced_class_map,
    is_member,
    stability_check,
    tau_star,
    v_ideal_of,
    v_product,
)
from krull_forge.skew import SkewLaurentPoly, class_group_of_skew_extension


def transcript(G: FGAbelianGroup) -> Iterator[str]:
    spec = build_realization(RealizationParams(G, 1))
    yield f"# Realizing G = {G}"
    if G.is_trivial():
        yield "G is trivial: every prime has class 0 and H is the whole free monoid."
    yield "Primes are triples (orbit, shift, class); tau shifts (i, n, g) to (i, n+1, g)."

    g = G.gens()[-1] if G.ngens else G.zero()
    p, p2 = spec.primes_in_class(g, 2)
    q, q2 = [c for c in spec.primes_in_class(-g, 4) if c not in (p, p2)][:2]
    yield f"sample primes of class {g}: {p!r}, {p2!r}"
    yield f"sample primes of class {-g}: {q!r}, {q2!r}"
    yield f"tau({p!r}) = {spec.tau(p)!r}"

    P, P2, Q, Q2 = (FreeAbelian.prime(x) for x in (p, p2, q, q2))
    single = P
    yield f"is {single!r} in H? {is_member(spec, single)} (class {ideal_class(spec, single)})"
    h1, h2 = P * Q, P * Q2
    yield f"members: {h1!r} in H: {is_member(spec, h1)}; {h2!r} in H: {is_member(spec, h2)}"
    yield f"divisorial ideal generated by them: {v_ideal_of(spec, [h1, h2])!r}"
    prod = v_product(P ** 2, P2.inv())
    yield f"divisorial product p^2 * p'^-1 = {prod!r}, class {ideal_class(spec, prod)}"
    moved = tau_star(spec, prod)
    yield f"tau_* of it = {moved!r}, class {ideal_class(spec, moved)}; stability: {stability_check(spec, prod).verdict.value}"

    algebra = GroupAlgebra(spec)
    a, b = P * Q, P2 * Q2
    lo, hi = (a, b) if quotient_order_compare(spec, a, b) is Cmp.LT else (b, a)
    f = algebra.elem({lo: 2, hi: 4})
    n = normed_generator(f)
    yield f"in K[G]: f = {f!r}"
    yield f"normed generator of f*K[G]: {n!r}"
    yield f"phi(normed generator) = {phi_apply(n)!r}; ideal moved: {principal_ideal_moved(f)}"

    A = SkewLaurentPoly.const(algebra.monomial(a, 3))
    x = SkewLaurentPoly.x(algebra)
    yield f"skew product a*x = {A * x!r}"
    yield f"             x*sigma(a) = {x * SkewLaurentPoly.const(phi_apply(algebra.monomial(a, 3)))!r}"

    sigma_star = induced_class_map(spec)
    seq = class_group_of_skew_extension(G, sigma_star, [])
    yield f"induced action on C(H) is the identity: {sigma_star == GroupHom.identity(G)}"
    if G.is_trivial():
        yield "class group is trivial, so T is a simple Dedekind domain with trivial class group"
    yield f"G(T) = {seq.result}"
