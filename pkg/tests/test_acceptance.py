"""Acceptance criteria, each run at its stated sample size and exact tolerance.

Every test records its outcome through ``record_criterion``; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import json
import random
import time

import pytest

from krull_forge.abelian import FGAbelianGroup, GroupHom, cokernel, mat_mul, parse_group, smith_normal_form
from krull_forge.cli import dump_json, main
from krull_forge.construct import RealizationParams, build_realization
from krull_forge.galg import GroupAlgebra, principal_ideal_moved, random_nonunit
from krull_forge.krull import Stability, identity_spec, make_spec, simplicity_verdicts
from krull_forge.pipeline import (
    suite_normed_generator,
    suite_order,
    suite_skew_relation,
    suite_stability,
)
from krull_forge.rng import stream
from krull_forge.skew import class_group_of_skew_extension

from oracles import determinantal_cokernel, enumerate_cokernel_orders, group_element_orders, laplace_det

GROUPS = ["0", "Z/2", "Z/6", "Z", "Z^2 x Z/4", "Z/2 x Z/2"]
SEED = 42

C1 = "1. realization correctness"
C2 = "2. stability suite"
C3 = "3. simplicity-check equivalence"
C4 = "4. order suites"
C5 = "5. normed-generator suite"
C6 = "6. skew arithmetic suite"
C7 = "7. SNF/cokernel oracle"
C8 = "8. exact-sequence sanity"
C9 = "9. prime tallies"
C10 = "10. determinism"


def spec_for(text):
    return build_realization(RealizationParams(parse_group(text)))


_REALIZE_CACHE: dict[str, tuple[int, dict, float]] = {}


def realize(text, tmp_path_factory):
    if text not in _REALIZE_CACHE:
        path = tmp_path_factory.mktemp("realize") / "report.json"
        start = time.perf_counter()
        code = main(["realize", "--group", text, "--seed", str(SEED), "--json", str(path)])
        elapsed = time.perf_counter() - start
        _REALIZE_CACHE[text] = (code, json.loads(path.read_text()), elapsed)
    return _REALIZE_CACHE[text]


@pytest.mark.parametrize("text", GROUPS)
def test_c1_realization(text, tmp_path_factory, record_criterion, capsys):
    code, rep, elapsed = realize(text, tmp_path_factory)
    capsys.readouterr()
    G = parse_group(text)
    gt = rep["class_group_of_T"]
    ok = (
        code == 0
        and gt["free_rank"] == G.free_rank
        and tuple(gt["torsion"]) == G.torsion
        and elapsed < 10
    )
    record_criterion(C1, ok, f"{text} -> {gt['text']} in {elapsed:.1f}s")


@pytest.mark.parametrize("text", GROUPS)
def test_c2_stability(text, record_criterion):
    res = suite_stability(spec_for(text), 1000, SEED, 1000)
    tally = res.details["tally"]
    ok = res.passed and sum(tally.values()) == 1000 and tally[Stability.PROPER_CONTAINMENT.value] == 0
    record_criterion(C2, ok, f"{text}: {tally}")


def test_c3_equivalence(record_criterion):
    counts = {"valid": 0, "identity": 0, "cycle": 0}
    bad = []
    for i in range(200):
        text = GROUPS[i % len(GROUPS)]
        for kind in ("shift", "identity", f"cycle:{1 + i % 12}"):
            v = simplicity_verdicts(make_spec(parse_group(text), kind), 8, 1000, SEED * 1000 + i)
            expected = (True,) * 3 if kind == "shift" else (False,) * 3
            counts["valid" if kind == "shift" else kind.split(":")[0]] += 1
            if v.verdicts != expected:
                bad.append(f"{text} {kind} seed {i}: {v.verdicts}")
    record_criterion(C3, not bad, f"{counts}, disagreements {bad[:3]}")


@pytest.mark.parametrize("text", GROUPS)
def test_c4_orders(text, record_criterion):
    res = suite_order(spec_for(text), 500, SEED, 1000, triples=1000)
    record_criterion(C4, res.passed and res.details["triples"] == 1000, f"{text}: {res.witnesses[:1]}")


@pytest.mark.parametrize("text", GROUPS)
def test_c5_normed_generator(text, record_criterion):
    res = suite_normed_generator(spec_for(text), 500, SEED, 1000, unit_trials=200)
    record_criterion(C5, res.passed and res.details["unmoved"] == 0, f"{text}: {res.witnesses[:1]}")


def test_c5_identity_spec_is_not_moved(record_criterion):
    algebra = GroupAlgebra(identity_spec(parse_group("Z/6")))
    rng = stream(SEED, "acceptance", "identity-moved")
    moved = [principal_ideal_moved(random_nonunit(algebra, rng)) for _ in range(500)]
    record_criterion(C5, not any(moved), f"identity spec: {sum(moved)} of 500 moved")


@pytest.mark.parametrize("text", GROUPS)
def test_c6_skew(text, record_criterion):
    res = suite_skew_relation(spec_for(text), 200, SEED, 1000, triples=500)
    record_criterion(C6, res.passed, f"{text}: {res.witnesses[:1]}")


def test_c7_snf_cokernel(record_criterion):
    rng = random.Random(SEED)
    problems = []
    enumerated = 0
    for trial in range(200):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(n)]
        U, S, V = smith_normal_form(M)
        diag = [S[i][i] for i in range(min(n, m))]
        if mat_mul(mat_mul(U, M), V) != S or abs(laplace_det(U)) != 1 or abs(laplace_det(V)) != 1:
            problems.append(f"trial {trial}: UMV != S or not unimodular")
        if any(S[i][j] for i in range(n) for j in range(m) if i != j) or any(d < 0 for d in diag):
            problems.append(f"trial {trial}: S not a nonnegative diagonal")
        if any((b != 0) if a == 0 else (b % a) for a, b in zip(diag, diag[1:])):
            problems.append(f"trial {trial}: no divisibility chain {diag}")
        Q, _ = cokernel(GroupHom(FGAbelianGroup(m), FGAbelianGroup(n), M))
        if (Q.free_rank, list(Q.torsion)) != determinantal_cokernel(M, n):
            problems.append(f"trial {trial}: cokernel {Q} disagrees with determinantal divisors")
        orders = enumerate_cokernel_orders(M, n, limit=1000)
        if orders is not None:
            enumerated += 1
            if Q.free_rank or orders != group_element_orders(Q.torsion):
                problems.append(f"trial {trial}: cokernel {Q} disagrees with enumeration")
    record_criterion(C7, not problems, f"200 matrices, {enumerated} enumerated; {problems[:2]}")


def test_c8_exact_sequence(record_criterion):
    Z, Z2 = parse_group("Z"), parse_group("Z/2")
    results = {
        "(Z, -id)": (class_group_of_skew_extension(Z, GroupHom.scalar(Z, -1), []).result, Z2),
        "(Z/2, id)": (class_group_of_skew_extension(Z2, GroupHom.identity(Z2), []).result, Z2),
    }
    for text in GROUPS:
        G = parse_group(text)
        results[f"({text}, id)"] = (class_group_of_skew_extension(G, GroupHom.identity(G), []).result, G)
    wrong = [f"{k} -> {got}" for k, (got, want) in results.items() if got != want]
    record_criterion(C8, not wrong, f"{len(results)} cases; wrong: {wrong}")


@pytest.mark.parametrize("text", GROUPS)
def test_c9_prime_tallies(text, tmp_path_factory, record_criterion, capsys):
    _, rep, _ = realize(text, tmp_path_factory)
    capsys.readouterr()
    order = parse_group(text).order()
    want = min(order, 5) if order is not None else 5
    tallies = rep["prime_tallies"]
    ok = len({t["class"] for t in tallies}) == want and all(t["distinct_primes"] >= 200 for t in tallies)
    record_criterion(C9, ok, f"{text}: {len(tallies)} classes, min {min(t['distinct_primes'] for t in tallies)}")


@pytest.mark.parametrize(
    "argv",
    [
        ["realize", "--group", "Z/6"],
        ["realize", "--group", "Z^2 x Z/4", "--orbits", "2"],
        ["verify", "--group", "Z/2 x Z/2", "--adversarial", "cycle:3"],
    ],
    ids=["realize-Z6", "realize-Z2xZ4", "verify-cycle3"],
)
def test_c10_determinism(argv, tmp_path, record_criterion, capsys):
    texts = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        main(argv + ["--seed", str(SEED), "--json", str(path)])
        data = json.loads(path.read_text())
        assert "timings" in data
        del data["timings"]
        texts.append(dump_json(data).encode())
    capsys.readouterr()
    record_criterion(C10, texts[0] == texts[1], f"{argv[0]} {argv[2]}: {len(texts[0])} bytes")
