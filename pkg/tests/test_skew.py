import pytest

from krull_forge.abelian import FGAbelianGroup, GroupHom, GroupMismatchError, parse_group
from krull_forge.construct import RealizationParams, build_realization
from krull_forge.galg import AlgebraMismatchError, GroupAlgebra, PrimeField, phi_apply, random_elem
from krull_forge.krull import identity_spec
from krull_forge.rng import stream
from krull_forge.skew import (
    SkewLaurentPoly,
    class_group_of_skew_extension,
    nagata_quotient,
    random_skew,
    simplicity_certificate,
    skew_add,
    skew_mul,
)

from oracles import determinantal_cokernel

GROUPS = ["0", "Z/2", "Z/6", "Z", "Z^2 x Z/4", "Z/2 x Z/2"]


def algebra_for(text="Z/2", field=None):
    return GroupAlgebra(build_realization(RealizationParams(parse_group(text))), field)


def semidirect_product(f, g):
    """Multiply in the group ring of ``G ⋊ Z``, pair by pair.

    The pair ``(n, h)`` stands for ``x^n h``; pairs multiply as
    ``(m, g)(n, h) = (m + n, τ^n(g) h)``.
    """
    spec = f.algebra.spec
    F = f.algebra.field
    out = {}
    for m, a in f.coeffs.items():
        for gm, c in a.terms.items():
            for n, b in g.coeffs.items():
                for hn, d in b.terms.items():
                    key = (m + n, gm.map_basis(lambda p: spec.tau_pow(p, n)) * hn)
                    out[key] = F(out.get(key, 0) + c * d)
    return {k: v for k, v in out.items() if v != 0}


def flatten(f):
    return {(m, g): c for m, a in f.coeffs.items() for g, c in a.terms.items()}


def test_defining_relation_example():
    A = algebra_for()
    a = random_elem(A, stream(0, "ex"), 2, 2)
    x = SkewLaurentPoly.x(A)
    assert SkewLaurentPoly.const(a) * x == x * SkewLaurentPoly.const(phi_apply(a))
    assert x * SkewLaurentPoly.x(A, -1) == SkewLaurentPoly.one(A)
    assert (SkewLaurentPoly.const(a) * x).coeffs == {1: phi_apply(a)}


def test_zero_and_mismatch():
    A, B = algebra_for(), algebra_for()
    assert SkewLaurentPoly.zero(A).is_zero()
    assert (SkewLaurentPoly.x(A) - SkewLaurentPoly.x(A)).is_zero()
    with pytest.raises(AlgebraMismatchError):
        SkewLaurentPoly.x(A) + SkewLaurentPoly.x(B)
    with pytest.raises(AlgebraMismatchError):
        SkewLaurentPoly(A, {0: B.one()})


@pytest.mark.parametrize("text", GROUPS)
def test_defining_relation_all_powers(text):
    A = algebra_for(text)
    rng = stream(1, "relation", text)
    for _ in range(40):
        a = random_elem(A, rng, 1, 3)
        for n in range(-5, 6):
            xn = SkewLaurentPoly.x(A, n)
            assert SkewLaurentPoly.const(a) * xn == xn * SkewLaurentPoly.const(phi_apply(a, n))


@pytest.mark.parametrize("field", [None, PrimeField(3)], ids=["QQ", "GF3"])
@pytest.mark.parametrize("text", GROUPS)
def test_product_matches_semidirect_group_ring(text, field):
    A = algebra_for(text, field)
    rng = stream(2, "oracle", text, repr(field))
    for _ in range(40):
        f, g = random_skew(A, rng), random_skew(A, rng)
        assert flatten(skew_mul(f, g)) == semidirect_product(f, g)


@pytest.mark.parametrize("text", GROUPS)
def test_ring_axioms_and_domain(text):
    A = algebra_for(text)
    rng = stream(3, "skew-axioms", text)
    one = SkewLaurentPoly.one(A)
    for _ in range(60):
        f, g, h = (random_skew(A, rng) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert (g + h) * f == skew_add(g * f, h * f)
        assert f * one == f == one * f
        assert not (f * g).is_zero()


def test_noncommutative():
    A = algebra_for()
    a = random_elem(A, stream(4, "nc"), 2, 2)
    x = SkewLaurentPoly.x(A)
    assert SkewLaurentPoly.const(a) * x != x * SkewLaurentPoly.const(a)


# -- class groups ------------------------------------------------------------


def test_class_group_z_minus_identity_is_z2():
    Z = parse_group("Z")
    res = class_group_of_skew_extension(Z, GroupHom.scalar(Z, -1), [])
    assert res.result == parse_group("Z/2")


def test_class_group_z2_identity_is_z2():
    Z2 = parse_group("Z/2")
    res = class_group_of_skew_extension(Z2, GroupHom.identity(Z2), [])
    assert res.result == Z2
    assert str(res.result) == "Z/2"


@pytest.mark.parametrize("text", GROUPS)
def test_identity_action_returns_the_group(text):
    G = parse_group(text)
    res = class_group_of_skew_extension(G, GroupHom.identity(G), [])
    assert res.result == G
    if G.order() is not None:
        assert {res.beta_on_primes(g) for g in G.elements()} == set(res.result.elements())


def test_swap_on_z2_gives_z():
    Z2 = FGAbelianGroup(2)
    swap = GroupHom(Z2, Z2, [[0, 1], [1, 0]])
    assert class_group_of_skew_extension(Z2, swap).result == parse_group("Z")


def test_random_actions_on_free_groups_match_determinantal_oracle():
    rng = stream(5, "sigma")
    checked = 0
    while checked < 60:
        n = int(rng.integers(1, 4))
        M = [[int(rng.integers(-3, 4)) for _ in range(n)] for _ in range(n)]
        C = FGAbelianGroup(n)
        res = class_group_of_skew_extension(C, GroupHom(C, C, M))
        diff = [[int(i == j) - M[i][j] for j in range(n)] for i in range(n)]
        free, torsion = determinantal_cokernel(diff, n)
        assert (res.result.free_rank, list(res.result.torsion)) == (free, torsion)
        checked += 1


def test_nagata_quotient_and_killed_classes():
    Z = parse_group("Z")
    Q, _ = nagata_quotient(Z, [Z.elem([2])])
    assert Q == parse_group("Z/2")
    C = parse_group("Z x Z/2")
    res = class_group_of_skew_extension(C, GroupHom.identity(C), [C.elem([1, 0])])
    assert res.localized == parse_group("Z/2") and res.result == parse_group("Z/2")
    assert res.beta_on_primes(C.elem([1, 1])) == res.result.elem([1])


def test_killed_subgroup_must_be_stable():
    Z2 = FGAbelianGroup(2)
    swap = GroupHom(Z2, Z2, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        class_group_of_skew_extension(Z2, swap, [Z2.elem([1, 0])])
    # The diagonal is stable under the swap: Z^2/diag = Z, swap acts as -1.
    assert class_group_of_skew_extension(Z2, swap, [Z2.elem([1, 1])]).result == parse_group("Z/2")


def test_sigma_star_must_be_an_endomorphism():
    with pytest.raises(GroupMismatchError):
        class_group_of_skew_extension(parse_group("Z"), GroupHom.identity(parse_group("Z/2")))
    with pytest.raises(GroupMismatchError):
        nagata_quotient(parse_group("Z"), [parse_group("Z/2").elem([1])])


# -- simplicity certificate -----------------------------------------------------


def test_certificate_passes_on_shift():
    spec = build_realization(RealizationParams(parse_group("Z/6")))
    cert = simplicity_certificate(spec, 200, 40, 0)
    assert cert.passed
    d = cert.to_dict()
    assert d["verdict"] == "pass" and "bound=200" in d["scope"]
    assert [c["name"] for c in d["checks"]] == [
        "no-finite-orbit",
        "no-fixed-prime-set",
        "no-fixed-divisorial-ideal",
        "principal-ideal-moved",
        "automorphism-order-exceeds-bound",
    ]


def test_certificate_fails_every_check_on_identity():
    cert = simplicity_certificate(identity_spec(parse_group("Z/2")), 50, 20, 0)
    assert not cert.passed
    assert all(not c.passed for c in cert.checks)


def test_certificate_rejects_bad_bounds():
    spec = identity_spec(parse_group("Z/2"))
    with pytest.raises(ValueError):
        simplicity_certificate(spec, 0, 10, 0)
